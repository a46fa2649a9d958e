"""
Tests for exact Z[ω] arithmetic and the canonical row helpers
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffordkt import cyclotomic as cyc
from cliffordkt.cyclotomic import ExactAmplitude, ExactReal

coefficients = st.lists(st.integers(-40, 40), min_size=4, max_size=4)


class TestExactAmplitude(unittest.TestCase):
    """Scalar ring operations."""

    def test_omega_has_order_eight(self):
        """ω^8 = 1 and ω^4 = -1."""
        w = ExactAmplitude.omega()
        power = ExactAmplitude.from_int(1)
        for _ in range(4):
            power = power * w
        self.assertEqual(power, ExactAmplitude.from_int(-1))
        self.assertEqual(power * power, ExactAmplitude.from_int(1))

    def test_sqrt2_division(self):
        """√2 = ω - ω³ divides 2 and not 1."""
        two = ExactAmplitude.from_int(2)
        self.assertTrue(two.divisible_by_sqrt2())
        self.assertEqual(two.div_sqrt2().mul_sqrt2(), two)
        self.assertFalse(ExactAmplitude.from_int(1).divisible_by_sqrt2())

    def test_abs2_of_one_plus_omega(self):
        """|1 + ω|² = 2 + √2."""
        value = (ExactAmplitude(1) + ExactAmplitude.omega()).abs2()
        self.assertEqual(value, ExactReal(2, 1, 0))
        self.assertAlmostEqual(float(value), 2 + math.sqrt(2))

    def test_exact_real_reduction(self):
        """Equality ignores common powers of two."""
        self.assertEqual(ExactReal(4, 2, 2), ExactReal(2, 1, 1))
        self.assertNotEqual(ExactReal(0, 1, 1), ExactReal(1, 0, 1))

    @settings(max_examples=60, deadline=None)
    @given(coefficients, coefficients)
    def test_vectorised_multiply_matches_scalar(self, u, v):
        """Array multiplication agrees with ExactAmplitude products."""
        expected = (ExactAmplitude(*u) * ExactAmplitude(*v)).coef
        got = cyc.multiply(np.array(u, dtype=np.int64), np.array(v, dtype=np.int64))
        self.assertEqual(tuple(int(x) for x in got), expected)

    @settings(max_examples=60, deadline=None)
    @given(coefficients)
    def test_conjugate_matches_complex_value(self, u):
        """conj agrees with complex conjugation of the embedded value."""
        z = ExactAmplitude(*u)
        self.assertAlmostEqual(z.conj().to_complex(), z.to_complex().conjugate(), places=9)


class TestCanonicalRows(unittest.TestCase):
    """Denominator reduction and ω-phase canonicalisation."""

    def test_reduce_denominator_of_h_plus(self):
        """H|+⟩ written as (2, 0)/√2² reduces to |0⟩ with ℓ = 0."""
        coeffs = np.array([[[2, 0, 0, 0], [0, 0, 0, 0]]], dtype=np.int64)
        out, exps = cyc.reduce_denominator(coeffs, np.array([2]))
        np.testing.assert_array_equal(out[0], [[1, 0, 0, 0], [0, 0, 0, 0]])
        self.assertEqual(int(exps[0]), 0)

    def test_reduce_denominator_leaves_input(self):
        """The input array is not modified."""
        coeffs = np.array([[[2, 0, 0, 0], [2, 0, 0, 0]]], dtype=np.int64)
        cyc.reduce_denominator(coeffs, np.array([3]))
        self.assertEqual(int(coeffs[0, 0, 0]), 2)

    @settings(max_examples=60, deadline=None)
    @given(coefficients, coefficients, st.integers(0, 7))
    def test_phase_canonicalisation_is_invariant(self, first, second, m):
        """ω^m ψ and ψ share one canonical row."""
        coeffs = np.array([[first, second]], dtype=np.int64)
        if not coeffs.any():
            return
        exps = np.array([4])
        base = cyc.pack_rows(*cyc.canonicalize(coeffs, exps))
        rotated = cyc.pack_rows(*cyc.canonicalize(cyc.mul_omega(coeffs, m), exps))
        np.testing.assert_array_equal(base, rotated)

    def test_canonicalize_is_idempotent(self):
        """Canonicalising twice changes nothing."""
        coeffs = np.array([[[0, 0, 3, 0], [1, -1, 0, 2]]], dtype=np.int64)
        once = cyc.canonicalize(coeffs, np.array([3]))
        twice = cyc.canonicalize(*once)
        np.testing.assert_array_equal(once[0], twice[0])
        np.testing.assert_array_equal(once[1], twice[1])

    def test_lexmax_ties_take_first(self):
        """Equal candidates resolve to the smallest index."""
        candidates = np.array([[[1, 2], [3, 0], [3, 0]]], dtype=np.int64)
        self.assertEqual(int(cyc.lexmax_index(candidates)[0]), 1)

    def test_locate_rows_and_difference(self):
        """locate_rows finds positions; rows_difference drops shared rows."""
        reference = np.array([[0, 1], [0, 2], [1, 0]], dtype=np.int64)
        queries = np.array([[1, 0], [5, 5], [0, 1]], dtype=np.int64)
        np.testing.assert_array_equal(cyc.locate_rows(reference, queries), [2, -1, 0])

        other = np.array([[0, 2], [9, 9]], dtype=np.int64)
        np.testing.assert_array_equal(cyc.rows_difference(reference, other), [[0, 1], [1, 0]])

    def test_pack_unpack(self):
        """pack_rows puts ℓ first and unpack_rows restores the arrays."""
        coeffs = np.arange(16, dtype=np.int64).reshape(2, 2, 4)
        rows = cyc.pack_rows(coeffs, np.array([1, 2]))
        self.assertEqual(rows.shape, (2, 9))
        back, exps = cyc.unpack_rows(rows, 2)
        np.testing.assert_array_equal(back, coeffs)
        np.testing.assert_array_equal(exps, [1, 2])

    def test_overflow_guard(self):
        """Coefficients past the working range raise OverflowError."""
        with self.assertRaises(OverflowError):
            cyc.check_overflow(np.array([cyc.COEFF_LIMIT + 1], dtype=np.int64))


if __name__ == "__main__":
    unittest.main()
