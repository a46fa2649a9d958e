"""
Property suites run by `clifford-kt verify`

Every suite returns a SuiteReport; a suite passes when no case failed.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import cyclotomic as cyc
from . import reference
from .config import Settings
from .enumeration import (
    StateSet,
    enumerate_layers,
    normal_form_states_1q,
    strict_partition,
)
from .ma_normal import TCountOracle, oracle_agreement, proposition_report, random_words
from .pauli_algebra import PauliOperator
from .robustness import (
    RobustnessResult,
    assemble_problem,
    growth_threshold,
    lower_bound,
    robustness,
    solve_robustness,
)
from .sampler import (
    SamplingPlan,
    binomial_slack,
    compare_strategies,
    coverage,
    exact_estimator_mean,
    per_t_table,
)
from .solvers import get_solver
from .symmetry import (
    SymmetrySpec,
    build_group,
    enumerate_representatives,
    expand_orbit,
    orbit_canonical_rows,
    state_orbits,
)
from .targets import TargetState, build_target, factor_state, sh, tplus

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(message)
            logger.warning(f"[{self.name}] {message}")

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{self.name}: {status}, {self.cases} cases, {len(self.failures)} failures"


class StateCache:
    """Cumulative state sets per qubit count, extended on demand."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.layers: Dict[int, List[StateSet]] = {}

    def get(self, n: int, k: int) -> StateSet:
        return self.upto(n, k)[k]

    def upto(self, n: int, k: int) -> List[StateSet]:
        layers = self.layers.setdefault(n, [])
        if len(layers) <= k:
            layers.extend(enumerate_layers(n, k, start=layers, settings=self.settings))
        return layers[: k + 1]


class Verifier:
    """Shared state for the suites: settings, a solver and cached sets."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.states = StateCache(self.settings)
        self.solver = get_solver(
            self.settings.solver,
            primal_tol=self.settings.primal_tol,
            dual_tol=self.settings.dual_tol,
            max_iterations=self.settings.max_iterations,
        )
        self.solves: List[RobustnessResult] = []

    def robustness(self, target: TargetState, k: int) -> RobustnessResult:
        problem = assemble_problem(target, self.states.get(target.n, k))
        result = solve_robustness(target, problem, k, self.solver)
        self.solves.append(result)
        return result


def _counts(n: int) -> Callable[[Verifier], SuiteReport]:
    def suite(verifier: Verifier) -> SuiteReport:
        report = SuiteReport(f"counts-n{n}")
        layers = verifier.states.upto(n, reference.GATING_LEVELS[n])
        for k, layer in enumerate(layers):
            expected = reference.CUMULATIVE_COUNTS[(n, k)]
            report.check(len(layer) == expected, f"n={n} k={k}: {len(layer)} != {expected}")
            strict = strict_partition(layer, layers[k - 1] if k else None)
            expected = reference.STRICT_COUNTS[(n, k)]
            report.check(len(strict) == expected, f"strict n={n} k={k}: {len(strict)} != {expected}")
        return report

    return suite


def strict_law(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("strict-law")
    layers = verifier.states.upto(1, 10)
    for k in range(1, 11):
        strict = strict_partition(layers[k], layers[k - 1])
        report.check(len(strict) == 6 * 2**k, f"k={k}: {len(strict)} strict states")
        if k <= 8:
            generated = StateSet.from_states(1, k, strict.kind, normal_form_states_1q(k))
            report.check(generated.same_states(strict), f"k={k}: normal forms differ from strict set")
    return report


def monotone_sh(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("monotone-sh")
    target = sh(1)
    values = [verifier.robustness(target, k).value for k in range(8)]
    for k in range(1, len(values)):
        report.check(values[k] <= values[k - 1] + 1e-9, f"R_{k} = {values[k]} > R_{k - 1} = {values[k - 1]}")
    plateau = [values[k] for k in reference.SH_PLATEAU_LEVELS]
    report.check(max(plateau) - min(plateau) <= 1e-7, f"plateau spread {max(plateau) - min(plateau):.2e}")
    report.check(abs(values[7] - reference.SH_R7) <= 1e-6, f"R_7 = {values[7]}")
    for k in range(4):
        expected = reference.SH_ROBUSTNESS[(1, k)]
        report.check(abs(values[k] - expected) <= 1e-6, f"R_{k}(SH) = {values[k]}, table {expected}")
    return report


def monotone_tplus(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("monotone-tplus")
    for n in (1, 2):
        target = tplus(n)
        values = [verifier.robustness(target, k).value for k in range(4)]
        for k, value in enumerate(values):
            expected = reference.TPLUS_ROBUSTNESS[(n, k)]
            report.check(abs(value - expected) <= 1e-6, f"R_{k}(T+^{n}) = {value}, table {expected}")
            if k:
                report.check(value <= values[k - 1] + 1e-9, f"n={n}: R_{k} > R_{k - 1}")
    return report


def submultiplicative(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("submultiplicative")
    singles = {"tplus": factor_state("tplus"), "sh": factor_state("sh")}
    one = {(name, k): verifier.robustness(t, k).value for name, t in singles.items() for k in (0, 1)}
    for a in singles:
        for b in singles:
            joint = singles[a].tensor(singles[b])
            for ka in (0, 1):
                for kb in (0, 1):
                    value = verifier.robustness(joint, ka + kb).value
                    bound = one[(a, ka)] * one[(b, kb)]
                    report.check(
                        value <= bound + 1e-7,
                        f"R_{ka + kb}({a}*{b}) = {value} > {bound}",
                    )
    return report


def convexity(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("convexity")
    first, second = factor_state("tplus"), factor_state("sh")
    for k in (0, 1, 2):
        r1 = verifier.robustness(first, k).value
        r2 = verifier.robustness(second, k).value
        for p in np.linspace(0.0, 1.0, 11):
            value = verifier.robustness(first.mix(float(p), second), k).value
            report.check(value <= p * r1 + (1 - p) * r2 + 1e-7, f"k={k} p={p:.1f}: {value}")
    return report


def faithfulness(verifier: Verifier, samples: int = 500, seed: int = 0) -> SuiteReport:
    report = SuiteReport("faithfulness")
    rng = np.random.default_rng(seed)
    for n, k in ((1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)):
        states = verifier.states.get(n, k)
        picked = rng.choice(len(states), size=min(samples, len(states)), replace=False)
        vectors = states.vectors(picked)
        for i, vector in zip(picked, vectors):
            target = TargetState.from_vector(vector, f"state {i}")
            value = verifier.robustness(target, k).value
            report.check(abs(value - 1.0) <= 1e-8, f"n={n} k={k} state {i}: R = {value}")
    return report


def lower_bound_suite(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("lower-bound")
    report.check(abs(growth_threshold("H") - 0.54311) <= 1e-5, "H threshold")
    report.check(abs(growth_threshold("SH") - 0.89997) <= 1e-5, "SH threshold")
    for target in (tplus(1), tplus(2), sh(1), sh(2), factor_state("cs")):
        for k in range(3):
            result = verifier.robustness(target, k)
            report.check(
                result.lower_bound <= result.value + 1e-9,
                f"{target.provenance} k={k}: bound {result.lower_bound} > {result.value}",
            )
    sh2 = lower_bound(sh(2), 1)
    report.check(abs(sh2 - (1 + math.sqrt(3)) ** 2 / (4 * math.sqrt(2))) <= 1e-12, f"SH^2 k=1 bound {sh2}")
    return report


def duality(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("duality")
    if not verifier.solves:
        for target in (tplus(1), sh(1), tplus(2), factor_state("cs")):
            for k in range(3):
                verifier.robustness(target, k)
    for result in verifier.solves:
        label = f"{result.target} k={result.k}"
        report.check(abs(result.duality_gap) <= 1e-7, f"{label}: gap {result.duality_gap:.2e}")
        c = result.decomposition.coefficients
        negativity = float(-c[c < 0].sum())
        report.check(
            abs(np.abs(c).sum() - (1 + 2 * negativity)) <= 1e-9,
            f"{label}: L1 {np.abs(c).sum()} vs 1 + 2·{negativity}",
        )
    return report


def ma_normal_suite(verifier: Verifier, words: int = 10000, seed: int = 0) -> SuiteReport:
    report = SuiteReport("ma-normal")
    for k in range(1, 7):
        failures = proposition_report(k)
        checked = failures.pop("gates")
        report.cases += checked
        for name, count in failures.items():
            if count:
                report.failures.append(f"k={k}: {count} gates break the {name} property")
    oracle = TCountOracle(max_k=8)
    mismatches = oracle_agreement(random_words(words, 20, seed), oracle)
    report.check(mismatches == 0, f"{mismatches} of {words} words disagree with the oracle")
    return report


def sampler_coverage(verifier: Verifier, repetitions: int = 500, seed: int = 0) -> SuiteReport:
    report = SuiteReport("sampler-coverage")
    target = tplus(1)
    states = verifier.states.get(1, 0)
    result = verifier.robustness(target, 0)
    observable = PauliOperator.from_label("X")
    plan = SamplingPlan.create(result.decomposition, observable, 0.05, 0.01, seed)
    exact = float(target.expectations[observable.index])
    mixture = result.decomposition
    row = states.expectation_matrix(mixture.ids)[observable.index]
    implied = float(mixture.coefficients @ row)
    mean = exact_estimator_mean(plan, states)
    report.check(abs(mean - implied) <= 1e-12, f"estimator mean {mean} vs {implied}")
    failures, rate = coverage(plan, states, exact, repetitions, workers=verifier.settings.workers)
    slack = binomial_slack(plan.eps, repetitions)
    report.check(rate <= slack, f"failure rate {rate:.4f} over {slack:.4f} ({failures}/{repetitions})")
    return report


def t_strategy(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("t-strategy")
    shape = {1: 3, 2: 3, 3: 2, 4: 0}
    grid = per_t_table(reference.SH_ROBUSTNESS, shape)
    for key, expected in reference.SH_PER_T_COSTS.items():
        report.check(abs(grid[key] - expected) <= 5e-4, f"{key}: {grid[key]:.4f} vs {expected}")
    for n, k in reference.SH_BLOCKED_WINS:
        comparison = compare_strategies(k, n, k, reference.SH_ROBUSTNESS)
        report.check(comparison.winner == "blocked", f"n'={n} k'={k}: {comparison.winner}")
    return report


def symmetry_suite(verifier: Verifier) -> SuiteReport:
    report = SuiteReport("symmetry")
    full = SymmetrySpec(perm=True, local_h=True)
    for n, k in ((2, 0), (2, 1), (2, 2), (3, 0), (3, 1)):
        target = tplus(n)
        plain = verifier.robustness(target, k).value
        group = build_group(n, full, target.expectations)
        states = verifier.states.get(n, k)
        reduced = solve_robustness(target, assemble_problem(target, states, group), k, verifier.solver)
        report.check(abs(plain - reduced.value) <= 1e-7, f"n={n} k={k}: {plain} vs {reduced.value}")
        reps = enumerate_representatives(n, k, group)[-1]
        fast = solve_robustness(
            target, assemble_problem(target, reps, group, representatives=True), k, verifier.solver
        )
        report.check(abs(plain - fast.value) <= 1e-7, f"n={n} k={k} representatives: {fast.value}")
        covered = expand_orbit(reps.rows, n, group)
        report.check(np.array_equal(covered, states.rows), f"n={n} k={k}: orbits of representatives miss states")
        orbits = len(np.unique(state_orbits(states, group)))
        report.check(orbits == len(reps), f"n={n} k={k}: {orbits} orbits, {len(reps)} representatives")
    return report


def representatives_suite(verifier: Verifier, samples: int = 200, sample_seed: int = 0) -> SuiteReport:
    report = SuiteReport("representatives")
    target = tplus(3)
    group = build_group(3, SymmetrySpec(perm=True, local_h=True), target.expectations)
    reps = enumerate_representatives(3, 3, group, progress=verifier.settings.progress)[-1]
    expected = reference.TPLUS3_K3_REPRESENTATIVES
    report.check(len(reps) == expected, f"{len(reps)} representatives, expected {expected}")
    rng = np.random.default_rng(sample_seed)
    for i in rng.choice(len(reps), size=min(samples, len(reps)), replace=False):
        orbit = expand_orbit(reps.rows[i], 3, group)
        report.check(group.order % len(orbit) == 0, f"orbit of {i} has size {len(orbit)}")
        canonical = cyc.unique_rows(orbit_canonical_rows(orbit, 3, group))
        report.check(np.array_equal(canonical, reps.rows[[i]]), f"orbit of {i} has another representative")
    return report


# Symmetries each table family is solved under
TABLE_SYMMETRIES: Dict[str, List[str]] = {
    "tplus": ["perm", "localH"],
    "sh": ["perm", "localSH"],
    "cs": ["perm"],
    "ccz": ["perm"],
}

# Highest level solved per qubit count
QUICK_TABLE_LEVELS: Dict[int, int] = {1: 3, 2: 3, 3: 1}
FULL_TABLE_LEVELS: Dict[int, int] = {1: 3, 2: 3, 3: 2, 4: 2}


def tables_suite(verifier: Verifier, levels: Optional[Dict[int, int]] = None) -> SuiteReport:
    """
    Solve every robustness table entry within `levels` and compare.

    Entries are solved on orbit representatives under the family's
    symmetries. Cells with a closed form are held to 1e-7.
    """
    report = SuiteReport("tables")
    levels = QUICK_TABLE_LEVELS if levels is None else levels
    spec_of = {family: SymmetrySpec.from_flags(flags) for family, flags in TABLE_SYMMETRIES.items()}
    solved: Dict[Tuple[str, int, int], float] = {}

    for family, grid in reference.ROBUSTNESS_TABLES.items():
        for copies, k in sorted(grid):
            target = build_target(f"{family}^{copies}")
            if k > levels.get(target.n, -1):
                continue
            result = robustness(target, k, symmetry=spec_of[family], settings=verifier.settings, fast_path=True)
            verifier.solves.append(result)
            expected, tol = reference.expected_value(grid, copies, k)
            solved[(family, copies, k)] = result.value
            report.check(
                abs(result.value - expected) <= tol,
                f"R_{k}({family}^{copies}) = {result.value:.9f}, table {expected:.9f}",
            )
            previous = solved.get((family, copies, k - 1))
            if previous is not None:
                report.check(result.value <= previous + 1e-9, f"{family}^{copies}: R_{k} > R_{k - 1}")

    grid = reference.TPLUS_ROBUSTNESS
    for high, low in reference.TPLUS_SATURATION:
        tabled = (reference.lookup(grid, *high), reference.lookup(grid, *low))
        report.check(tabled[0] == tabled[1], f"table cells {high} and {low} differ")
        pair = (solved.get(("tplus", *high)), solved.get(("tplus", *low)))
        if None not in pair:
            report.check(abs(pair[0] - pair[1]) <= 1e-7, f"R at {high} = {pair[0]} vs {low} = {pair[1]}")
    return report


SUITES: Dict[str, Callable[[Verifier], SuiteReport]] = {
    "counts-n1": _counts(1),
    "counts-n2": _counts(2),
    "counts-n3": _counts(3),
    "counts-n4": _counts(4),
    "strict-law": strict_law,
    "monotone-sh": monotone_sh,
    "monotone-tplus": monotone_tplus,
    "submultiplicative": submultiplicative,
    "convexity": convexity,
    "faithfulness": faithfulness,
    "lower-bound": lower_bound_suite,
    "duality": duality,
    "ma-normal": ma_normal_suite,
    "sampler-coverage": sampler_coverage,
    "t-strategy": t_strategy,
    "symmetry": symmetry_suite,
    "representatives": representatives_suite,
    "tables": tables_suite,
}


def run_suite(name: str, verifier: Optional[Verifier] = None) -> SuiteReport:
    """
    Run one named suite.

    Args:
        name: Key of SUITES
        verifier: Shared context; a fresh one is made when omitted

    Returns:
        SuiteReport
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"Unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    verifier = verifier or Verifier()
    logger.info(f"Running suite {name}")
    report = suite(verifier)
    logger.info(report.summary())
    return report


def run_suites(names: List[str], settings: Optional[Settings] = None) -> List[Tuple[str, SuiteReport]]:
    verifier = Verifier(settings)
    return [(name, run_suite(name, verifier)) for name in names]
