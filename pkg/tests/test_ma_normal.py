"""
Tests for the Matsumoto-Amano normal form and the exact T-count oracle
"""

import unittest

import numpy as np
import pytest

from cliffordkt.errors import ParseError
from cliffordkt.ma_normal import (
    GateWord,
    NormalForm,
    TCountOracle,
    clifford_table,
    matrix_keys,
    oracle_agreement,
    proposition_report,
    random_words,
    strict_gate_count,
    strict_normal_forms,
    to_normal_form,
)


def same_unitary(a: GateWord, b: GateWord) -> bool:
    ma, ea = a.matrix()
    mb, eb = b.matrix()
    keys = matrix_keys(np.stack([ma, mb]), np.array([ea, eb]))
    return bool(np.array_equal(keys[0], keys[1]))


class TestGateWord(unittest.TestCase):
    """Parsing and basic word operations."""

    def test_parse_ignores_whitespace(self):
        """Spaced and compact words are the same."""
        self.assertEqual(GateWord.parse("H T s"), GateWord("HTS"))

    def test_parse_error_offset(self):
        """An unknown letter reports its offset."""
        with self.assertRaises(ParseError) as ctx:
            GateWord.parse("HTX")
        self.assertEqual(ctx.exception.offset, 2)

    def test_inverse(self):
        """A word times its inverse is the identity."""
        word = GateWord("HTSHT")
        self.assertTrue(same_unitary(word + word.inverse(), GateWord("")))

    def test_t_count_of_letters(self):
        """t_count counts T letters."""
        self.assertEqual(GateWord("THTT").t_count(), 3)


class TestCliffordTable(unittest.TestCase):
    """The 24 one-qubit Cliffords."""

    def test_table_size(self):
        """The closure has 24 elements with the identity first."""
        table = clifford_table()
        self.assertEqual(len(table.words), 24)
        self.assertEqual(table.words[0], "")

    def test_composition_is_consistent(self):
        """compose agrees with concatenating words."""
        table = clifford_table()
        for a in (1, 5, 17):
            for b in (2, 9, 23):
                word = GateWord(table.words[a] + table.words[b])
                self.assertEqual(
                    table.compose(a, b), table.index_of(*word.matrix())
                )

    def test_non_clifford_lookup(self):
        """T is not in the table; only index_of is offered for lookups."""
        table = clifford_table()
        with self.assertRaises(KeyError):
            table.index_of(*GateWord("T").matrix())
        self.assertFalse(hasattr(table, "find"))


class TestNormalForm(unittest.TestCase):
    """Rewriting words into normal form."""

    def test_single_t(self):
        """T is its own normal form."""
        nf = to_normal_form("T")
        self.assertEqual(nf.syllables, ("T",))
        self.assertEqual(nf.t_count, 1)
        self.assertEqual(nf.clifford, 0)

    def test_tt_is_clifford(self):
        """T·T = S has T-count zero."""
        nf = to_normal_form("TT")
        self.assertEqual(nf.t_count, 0)
        self.assertEqual(nf.clifford, clifford_table().gate_index["S"])

    def test_htht(self):
        """HTHT has two HT syllables."""
        nf = to_normal_form("HTHT")
        self.assertEqual(nf.syllables, ("HT", "HT"))
        self.assertEqual(nf.clifford, 0)

    def test_t_to_the_eight(self):
        """T^8 is the identity."""
        nf = to_normal_form("T" * 8)
        self.assertEqual((nf.t_count, nf.clifford), (0, 0))

    def test_normal_form_preserves_unitary(self):
        """The normal-form word implements the same unitary."""
        for word in random_words(40, 15, seed=3):
            self.assertTrue(same_unitary(word, to_normal_form(word).word), str(word))

    def test_idempotent(self):
        """Normalising a normal form's word returns it unchanged."""
        for word in random_words(40, 15, seed=4):
            nf = to_normal_form(word)
            self.assertEqual(to_normal_form(nf.word), nf)

    def test_invalid_syllable(self):
        """Only the first syllable may be T."""
        with self.assertRaises(ValueError):
            NormalForm(("HT", "T"), 0)
        with self.assertRaises(IndexError):
            NormalForm((), 24)

    def test_to_dict(self):
        """Serialised form lists syllables and the Clifford word."""
        data = to_normal_form("HTHTS").to_dict()
        self.assertEqual(data["t_count"], 2)
        self.assertEqual(data["syllables"], ["HT", "HT"])
        self.assertEqual(data["clifford_word"], "S")


class TestCounting(unittest.TestCase):
    """Strict gate counts and the propositions."""

    def test_strict_gate_count(self):
        """24, 72, 144 gates of T-count 0, 1, 2."""
        self.assertEqual([strict_gate_count(k) for k in range(3)], [24, 72, 144])

    def test_strict_normal_forms_are_distinct(self):
        """Distinct normal forms give distinct unitaries."""
        forms = list(strict_normal_forms(2))
        self.assertEqual(len(forms), strict_gate_count(2))
        words = [nf.word for nf in forms]
        matrices = [w.matrix() for w in words]
        keys = matrix_keys(np.stack([m for m, _ in matrices]), np.array([e for _, e in matrices]))
        self.assertEqual(len(np.unique(keys, axis=0)), len(forms))

    def test_proposition_report(self):
        """No failures for T-count 2."""
        report = proposition_report(2)
        self.assertEqual(report.pop("gates"), 144)
        self.assertEqual(sum(report.values()), 0)

    def test_oracle_level_sizes(self):
        """Breadth-first levels match the strict counts."""
        oracle = TCountOracle(max_k=4)
        self.assertEqual(oracle.level_sizes, [24, 72, 144, 288, 576])

    def test_oracle_agreement(self):
        """Normal-form T-counts match the oracle on random words."""
        oracle = TCountOracle(max_k=6)
        self.assertEqual(oracle_agreement(random_words(300, 12, seed=1), oracle), 0)
        self.assertEqual(oracle.t_count("HTHT"), 2)


@pytest.mark.slow
class TestLongWords(unittest.TestCase):
    """Large random checks."""

    def test_ten_thousand_words(self):
        """10000 words of length ≤ 20 agree with an 8-level oracle."""
        oracle = TCountOracle(max_k=8)
        self.assertEqual(oracle_agreement(random_words(10000, 20, seed=0), oracle), 0)


if __name__ == "__main__":
    unittest.main()
