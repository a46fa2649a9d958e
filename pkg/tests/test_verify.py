"""
Tests for the verification suites
"""

import unittest

import pytest

from cliffordkt.verify import (
    FULL_TABLE_LEVELS,
    SUITES,
    SuiteReport,
    Verifier,
    run_suite,
    run_suites,
    tables_suite,
)


class TestSuiteReport(unittest.TestCase):
    """Report bookkeeping."""

    def test_check_counts_cases(self):
        """Failures are recorded with their message."""
        report = SuiteReport("demo")
        report.check(True, "fine")
        report.check(False, "broken")
        self.assertEqual(report.cases, 2)
        self.assertEqual(report.failures, ["broken"])
        self.assertFalse(report.passed)
        self.assertIn("FAIL", report.summary())


class TestFastSuites(unittest.TestCase):
    """Suites that run in seconds."""

    @classmethod
    def setUpClass(cls):
        cls.verifier = Verifier()

    def test_counts_one_qubit(self):
        """Counts for n = 1 through the gating level."""
        report = run_suite("counts-n1", self.verifier)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.cases, 22)

    def test_strict_law(self):
        """6·2^k strict states and normal forms."""
        self.assertTrue(run_suite("strict-law", self.verifier).passed)

    def test_monotone_sh(self):
        """The |SH⟩ plateau and the drop at k = 7."""
        report = run_suite("monotone-sh", self.verifier)
        self.assertTrue(report.passed, report.failures)

    def test_lower_bound_and_duality(self):
        """Bounds hold and every solve so far closes its gap."""
        self.assertTrue(run_suite("lower-bound", self.verifier).passed)
        report = run_suite("duality", self.verifier)
        self.assertTrue(report.passed, report.failures)
        self.assertGreater(report.cases, 0)

    def test_t_strategy(self):
        """Per-T grid and blocked wins."""
        self.assertTrue(run_suite("t-strategy", self.verifier).passed)

    def test_submultiplicative_and_convexity(self):
        """Tensor and mixture inequalities."""
        self.assertTrue(run_suite("submultiplicative", self.verifier).passed)
        self.assertTrue(run_suite("convexity", self.verifier).passed)

    def test_tables_low_levels(self):
        """Every table cell at k ≤ 1 on up to three qubits, plus the saturation cells."""
        report = tables_suite(self.verifier, levels={1: 1, 2: 1, 3: 1})
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.cases, 26)

    def test_unknown_suite(self):
        """Unknown names raise ValueError."""
        with self.assertRaises(ValueError):
            run_suite("nonsense", self.verifier)


class TestRegistry(unittest.TestCase):
    """Suite names."""

    def test_names(self):
        """Every documented suite is registered."""
        for name in ("counts-n1", "counts-n4", "faithfulness", "ma-normal", "sampler-coverage", "symmetry", "tables"):
            self.assertIn(name, SUITES)

    def test_run_suites_shares_state(self):
        """run_suites returns one report per name in order."""
        results = run_suites(["t-strategy", "lower-bound"])
        self.assertEqual([name for name, _ in results], ["t-strategy", "lower-bound"])


@pytest.mark.slow
class TestSlowSuites(unittest.TestCase):
    """Long-running suites."""

    @classmethod
    def setUpClass(cls):
        cls.verifier = Verifier()

    def test_monotone_tplus(self):
        """Table values and monotonicity for one and two copies."""
        report = run_suite("monotone-tplus", self.verifier)
        self.assertTrue(report.passed, report.failures)

    def test_counts_two_qubits(self):
        """Counts for n = 2 through k = 4."""
        self.assertTrue(run_suite("counts-n2", self.verifier).passed)

    def test_faithfulness(self):
        """Member states have robustness one."""
        self.assertTrue(run_suite("faithfulness", self.verifier).passed)

    def test_ma_normal(self):
        """Propositions up to T-count 6 and 10000 oracle words."""
        self.assertTrue(run_suite("ma-normal", self.verifier).passed)

    def test_sampler_coverage(self):
        """500-run coverage."""
        self.assertTrue(run_suite("sampler-coverage", self.verifier).passed)

    def test_symmetry(self):
        """Reduced and representative solves match plain ones; orbits cover the sets."""
        report = run_suite("symmetry", self.verifier)
        self.assertTrue(report.passed, report.failures)

    def test_representatives(self):
        """95074 representatives, each the canonical row of its own orbit."""
        report = run_suite("representatives", self.verifier)
        self.assertTrue(report.passed, report.failures)

    def test_tables_full(self):
        """Table cells up to k = 2 on three and four qubits."""
        report = tables_suite(self.verifier, levels=FULL_TABLE_LEVELS)
        self.assertTrue(report.passed, report.failures)


if __name__ == "__main__":
    unittest.main()
