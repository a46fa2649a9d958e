"""
Tests for Pauli operators, gate words and exact state updates
"""

import math
import unittest

import numpy as np

from cliffordkt.cyclotomic import ExactReal
from cliffordkt.errors import DimensionError, ParseError
from cliffordkt.pauli_algebra import (
    ExactState,
    Gate,
    PauliOperator,
    all_paulis,
    apply_clifford_generator,
    apply_gate,
    apply_pauli_rotation,
    canonical_form,
    conjugate_pauli_by_clifford,
    float_expectations,
    invert_word,
    parse_word,
    pauli_expectation,
)


def t_plus() -> ExactState:
    plus = apply_clifford_generator(ExactState.zero_state(1), "H", 0)
    return apply_gate(plus, Gate("T", (0,)))


class TestPauliOperator(unittest.TestCase):
    """Index and label conventions."""

    def test_single_qubit_indices(self):
        """I, X, Y, Z map to 0..3."""
        for index, label in enumerate("IXYZ"):
            self.assertEqual(PauliOperator.from_label(label).index, index)
            self.assertEqual(PauliOperator.from_index(1, index).label, label)

    def test_qubit_zero_is_most_significant(self):
        """XZ has index 1·4 + 3."""
        pauli = PauliOperator.from_label("XZ")
        self.assertEqual(pauli.index, 7)
        self.assertEqual(pauli.weight, 2)
        self.assertEqual(PauliOperator.from_index(2, 7), pauli)

    def test_all_paulis_in_index_order(self):
        """all_paulis enumerates 4^n operators in order."""
        labels = [p.label for p in all_paulis(2)]
        self.assertEqual(len(labels), 16)
        self.assertEqual(labels[:5], ["II", "IX", "IY", "IZ", "XI"])
        self.assertEqual(len(all_paulis(2, include_identity=False)), 15)

    def test_invalid_label(self):
        """Unknown letters raise ParseError."""
        with self.assertRaises(ParseError):
            PauliOperator.from_label("XQ")
        with self.assertRaises(IndexError):
            PauliOperator.from_index(1, 4)


class TestWords(unittest.TestCase):
    """Gate-word parsing and inversion."""

    def test_parse_word(self):
        """Tokens parse in application order."""
        word = parse_word("H0 S1 CNOT0,1")
        self.assertEqual(word, (Gate("H", (0,)), Gate("S", (1,)), Gate("CNOT", (0, 1))))

    def test_parse_error_offset(self):
        """The offset points at the bad token."""
        with self.assertRaises(ParseError) as ctx:
            parse_word("H0 Q1")
        self.assertEqual(ctx.exception.offset, 3)

    def test_cnot_needs_two_qubits(self):
        """CNOT with one qubit is rejected."""
        with self.assertRaises(ParseError):
            parse_word("CNOT0")

    def test_invert_word_undoes_word(self):
        """word followed by its inverse is the identity up to phase."""
        state = ExactState.zero_state(2)
        word = parse_word("H0 T0 S1 CNOT0,1 H1")
        image = state
        for gate in list(word) + list(invert_word(word)):
            image = apply_gate(image, gate)
        self.assertEqual(image, state)


class TestExactState(unittest.TestCase):
    """Exact amplitudes, canonical forms and expectations."""

    def test_t_plus_expectations(self):
        """T|+⟩ has Bloch vector (1/√2, 1/√2, 0)."""
        state = t_plus()
        self.assertTrue(state.is_normalized())
        x = pauli_expectation(state, PauliOperator.from_label("X"), exact=True)
        self.assertEqual(x, ExactReal(0, 1, 1))
        values = [pauli_expectation(state, p) for p in all_paulis(1)]
        np.testing.assert_allclose(values, [1, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-12)

    def test_float_expectations_agree(self):
        """The float path matches the exact path."""
        state = t_plus().tensor(apply_clifford_generator(ExactState.zero_state(1), "H", 0))
        exact = [pauli_expectation(state, p) for p in all_paulis(2)]
        np.testing.assert_allclose(float_expectations(state.to_vector()), exact, atol=1e-12)

    def test_hadamard_of_plus_is_zero(self):
        """H|+⟩ canonicalises to |0⟩ with ℓ = 0."""
        plus = apply_clifford_generator(ExactState.zero_state(1), "H", 0)
        back = apply_clifford_generator(plus, "H", 0)
        self.assertEqual(back.denom_exp, 0)
        self.assertEqual(back, ExactState.zero_state(1))

    def test_global_phase_is_ignored(self):
        """Y|0⟩ = i|1⟩ equals |1⟩ as a state."""
        image = apply_clifford_generator(ExactState.zero_state(1), "Y", 0)
        self.assertEqual(image, ExactState.basis_state(1, 1))

    def test_canonical_form_idempotent(self):
        """canonical_form is a fixed point on its output."""
        state = canonical_form(t_plus())
        self.assertTrue(np.array_equal(canonical_form(state).coeffs, state.coeffs))

    def test_rotation_about_z_is_t(self):
        """R_Z(π/4) acts as T up to phase."""
        plus = apply_clifford_generator(ExactState.zero_state(1), "H", 0)
        rotated = apply_pauli_rotation(plus, PauliOperator.from_label("Z"))
        self.assertEqual(rotated, t_plus())

    def test_rotation_keeps_stabilizer_eigenstate(self):
        """R_P fixes an eigenstate of P."""
        zero = ExactState.zero_state(1)
        self.assertEqual(apply_pauli_rotation(zero, PauliOperator.from_label("Z")), zero)

    def test_rotation_dimension_mismatch(self):
        """A 2-qubit Pauli cannot rotate a 1-qubit state."""
        with self.assertRaises(DimensionError):
            apply_pauli_rotation(ExactState.zero_state(1), PauliOperator.from_label("XX"))

    def test_bad_qubit_index(self):
        """Out-of-range qubits raise IndexError."""
        with self.assertRaises(IndexError):
            apply_clifford_generator(ExactState.zero_state(1), "H", 1)


class TestConjugation(unittest.TestCase):
    """C P C† on labels and signs."""

    def test_hadamard(self):
        """H swaps X and Z and negates Y."""
        h = parse_word("H0")
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("X"), h)
        self.assertEqual((image.label, sign), ("Z", 1))
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("Y"), h)
        self.assertEqual((image.label, sign), ("Y", -1))

    def test_phase_gate(self):
        """S maps X to Y and Y to -X."""
        s = parse_word("S0")
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("X"), s)
        self.assertEqual((image.label, sign), ("Y", 1))
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("Y"), s)
        self.assertEqual((image.label, sign), ("X", -1))

    def test_cnot(self):
        """CNOT spreads X forward and Z backward."""
        cnot = parse_word("CNOT0,1")
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("XI"), cnot)
        self.assertEqual((image.label, sign), ("XX", 1))
        image, sign = conjugate_pauli_by_clifford(PauliOperator.from_label("IZ"), cnot)
        self.assertEqual((image.label, sign), ("ZZ", 1))

    def test_conjugation_matches_expectations(self):
        """⟨Cψ|P|Cψ⟩ = sign·⟨ψ|P'|ψ⟩ with C† P C = sign·P'."""
        state = t_plus().tensor(ExactState.zero_state(1))
        word = parse_word("H1 CNOT0,1 S0")
        image = state
        for gate in word:
            image = apply_gate(image, gate)
        inverse = invert_word(word)
        for pauli in all_paulis(2):
            pulled, sign = conjugate_pauli_by_clifford(pauli, inverse)
            self.assertAlmostEqual(
                pauli_expectation(image, pauli), sign * pauli_expectation(state, pulled), places=12
            )


if __name__ == "__main__":
    unittest.main()
