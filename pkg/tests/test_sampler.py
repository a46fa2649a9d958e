"""
Tests for the quasi-probability sampler and the T-gate strategy comparison
"""

import math
import unittest

import numpy as np
import pytest

from cliffordkt import reference
from cliffordkt.enumeration import enumerate_cumulative
from cliffordkt.errors import MissingTableEntryError
from cliffordkt.pauli_algebra import PauliOperator
from cliffordkt.robustness import PseudoMixture, assemble_problem, solve_robustness
from cliffordkt.sampler import (
    DeviceBackend,
    SamplingPlan,
    binomial_slack,
    compare_strategies,
    coverage,
    estimate,
    exact_estimator_mean,
    payoffs,
    per_t_cost,
    per_t_table,
    plan_samples,
    sweep_strategies,
)
from cliffordkt.targets import tplus


class TestPlanning(unittest.TestCase):
    """Hoeffding shot counts."""

    def test_shot_counts(self):
        """δ = 0.1, ε = 0.05 needs 1476 shots at L1 = √2 and 738 at L1 = 1."""
        self.assertEqual(plan_samples(math.sqrt(2), 0.1, 0.05), 1476)
        self.assertEqual(plan_samples(1.0, 0.1, 0.05), 738)

    def test_never_below_bound(self):
        """Bounds a fraction of a nanoshot above an integer still round up."""
        delta, eps = 0.1, 0.05
        log_term = math.log(2.0 / eps)
        for excess in (1e-11, 1e-10, 5e-10, 9e-10):
            l1 = math.sqrt((1000 + excess) * delta**2 / (2.0 * log_term))
            raw = 2.0 / delta**2 * l1**2 * log_term
            self.assertGreaterEqual(plan_samples(l1, delta, eps), raw)

    def test_quadratic_in_l1(self):
        """Doubling L1 roughly quadruples the count."""
        self.assertAlmostEqual(plan_samples(2.0, 0.05, 0.01) / plan_samples(1.0, 0.05, 0.01), 4.0, places=2)

    def test_domain(self):
        """δ and ε lie in (0, 1); L1 is at least 1."""
        with self.assertRaises(ValueError):
            plan_samples(1.0, 0.0, 0.05)
        with self.assertRaises(ValueError):
            plan_samples(1.0, 1.0, 0.05)
        with self.assertRaises(ValueError):
            plan_samples(1.0, 0.1, 1.5)
        with self.assertRaises(ValueError):
            plan_samples(0.5, 0.1, 0.05)


class TestEstimator(unittest.TestCase):
    """Sampling the optimal T|+⟩ decomposition."""

    @classmethod
    def setUpClass(cls):
        cls.states = enumerate_cumulative(1, 0)[0]
        cls.target = tplus(1)
        cls.result = solve_robustness(cls.target, assemble_problem(cls.target, cls.states), 0)
        cls.observable = PauliOperator.from_label("X")

    def plan(self, delta=0.1, eps=0.05, seed=0):
        return SamplingPlan.create(self.result.decomposition, self.observable, delta, eps, seed)

    def test_plan_uses_l1(self):
        """The plan's L1 is R_0(T|+⟩)."""
        plan = self.plan()
        self.assertAlmostEqual(plan.l1, math.sqrt(2), places=7)
        self.assertEqual(plan.shots, plan_samples(plan.l1, 0.1, 0.05))
        self.assertEqual(plan.to_dict()["observable"], "X")

    def test_exact_mean_is_unbiased(self):
        """Σ p_i X(i) equals Σ c_i Tr(P ψ_i)."""
        plan = self.plan()
        mixture = self.result.decomposition
        row = self.states.expectation_matrix(mixture.ids)[self.observable.index]
        self.assertAlmostEqual(exact_estimator_mean(plan, self.states), float(mixture.coefficients @ row), places=12)
        self.assertAlmostEqual(exact_estimator_mean(plan, self.states), 1 / math.sqrt(2), places=7)

    def test_samples_are_bounded(self):
        """|X(i)| ≤ L1 for every outcome."""
        plan = self.plan()
        self.assertLessEqual(np.abs(payoffs(plan, self.states)).max(), plan.l1 + 1e-12)
        outcome = estimate(plan, self.states)
        self.assertLessEqual(outcome.max_abs_sample, plan.l1 + 1e-12)
        self.assertEqual(outcome.shots, plan.shots)

    def test_seeded_runs_repeat(self):
        """The same seed gives the same mean; other seeds differ."""
        first = estimate(self.plan(seed=7), self.states).mean
        again = estimate(self.plan(seed=7), self.states).mean
        other = estimate(self.plan(seed=8), self.states).mean
        self.assertEqual(first, again)
        self.assertNotEqual(first, other)

    def test_worker_count_is_irrelevant(self):
        """Block seeding makes the mean independent of the thread count."""
        plan = self.plan(delta=0.02)
        serial = estimate(plan, self.states, workers=1, block_size=500)
        threaded = estimate(plan, self.states, workers=4, block_size=500)
        self.assertEqual(serial.mean, threaded.mean)

    def test_single_state_mixture(self):
        """A one-state mixture returns the exact expectation every shot."""
        state_id = int(np.argmax(self.states.expectation_matrix()[self.observable.index]))
        mixture = PseudoMixture(np.array([state_id]), np.array([1.0]))
        plan = SamplingPlan(mixture, self.observable, 1, 0.1, 0.05)
        self.assertEqual(estimate(plan, self.states).mean, 1.0)

    def test_unresolved_ids(self):
        """Ids outside the state set raise IndexError."""
        mixture = PseudoMixture(np.array([99]), np.array([1.0]))
        plan = SamplingPlan(mixture, self.observable, 10, 0.1, 0.05)
        with self.assertRaises(IndexError):
            estimate(plan, self.states)

    def test_observable_size(self):
        """The observable must act on the states' qubits."""
        plan = SamplingPlan(self.result.decomposition, PauliOperator.from_label("XX"), 10, 0.1, 0.05)
        with self.assertRaises(ValueError):
            estimate(plan, self.states)

    def test_device_backend_is_a_hook(self):
        """The device backend is not implemented."""
        with self.assertRaises(NotImplementedError):
            payoffs(self.plan(), self.states, DeviceBackend())

    def test_small_coverage(self):
        """Misses stay within the binomial slack of ε."""
        plan = self.plan(delta=0.2, eps=0.1)
        exact = float(self.target.expectations[self.observable.index])
        failures, rate = coverage(plan, self.states, exact, repetitions=40)
        self.assertLessEqual(rate, binomial_slack(plan.eps, 40))
        self.assertEqual(rate, failures / 40)


@pytest.mark.slow
class TestCoverage(unittest.TestCase):
    """Failure rate over many repetitions."""

    def test_five_hundred_repetitions(self):
        """500 runs at δ = 0.05, ε = 0.01."""
        states = enumerate_cumulative(1, 0)[0]
        target = tplus(1)
        result = solve_robustness(target, assemble_problem(target, states), 0)
        plan = SamplingPlan.create(result.decomposition, PauliOperator.from_label("X"), 0.05, 0.01)
        exact = float(target.expectations[1])
        _, rate = coverage(plan, states, exact, repetitions=500)
        self.assertLessEqual(rate, binomial_slack(0.01, 500))


class TestStrategies(unittest.TestCase):
    """Per-T versus blocked magic-state costs."""

    def test_per_t_table(self):
        """Per-T costs from the |SH⟩ robustness grid."""
        grid = per_t_table(reference.SH_ROBUSTNESS, {1: 3, 2: 3, 3: 2, 4: 0})
        for key, expected in reference.SH_PER_T_COSTS.items():
            self.assertAlmostEqual(grid[key], expected, delta=5e-4, msg=str(key))

    def test_per_t_cost_domain(self):
        """n must be positive."""
        with self.assertRaises(ValueError):
            per_t_cost(1.2, 1.7, 0, 1)

    def test_blocked_wins_for_sh(self):
        """Blocks of |SH⟩ beat single copies in the known cells."""
        for n, k in reference.SH_BLOCKED_WINS:
            comparison = compare_strategies(k, n, k, reference.SH_ROBUSTNESS)
            self.assertEqual(comparison.winner, "blocked", f"n'={n} k'={k}")
            self.assertLess(comparison.blocked_cost, comparison.per_t_cost)

    def test_tplus_never_prefers_blocks(self):
        """For T|+⟩ per-T spending is never beaten."""
        for _, comparison in sweep_strategies(reference.TPLUS_ROBUSTNESS):
            self.assertNotEqual(comparison.winner, "blocked")

    def test_budget_scaling(self):
        """Larger budgets raise both costs to the number of blocks."""
        single = compare_strategies(1, 2, 1, reference.SH_ROBUSTNESS)
        double = compare_strategies(2, 2, 1, reference.SH_ROBUSTNESS)
        self.assertAlmostEqual(double.per_t_cost, single.per_t_cost**2, places=12)
        self.assertAlmostEqual(double.blocked_cost, single.blocked_cost**2, places=12)
        self.assertEqual(double.winner, single.winner)

    def test_no_t_gates_is_a_tie(self):
        """With k' = 0 both strategies use the same states."""
        self.assertEqual(compare_strategies(0, 2, 0, reference.SH_ROBUSTNESS).winner, "tie")

    def test_missing_entry(self):
        """Unknown table cells raise MissingTableEntryError."""
        with self.assertRaises(MissingTableEntryError):
            compare_strategies(3, 4, 3, reference.SH_ROBUSTNESS)

    def test_level_above_budget(self):
        """A block cannot use more T gates than the budget."""
        with self.assertRaises(ValueError):
            compare_strategies(1, 2, 2, reference.SH_ROBUSTNESS)


if __name__ == "__main__":
    unittest.main()
