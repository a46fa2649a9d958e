"""
Quasi-probability sampling estimator of Pauli expectations

Given ρ = Σ c_i |ψ_i⟩⟨ψ_i|, draw i with probability |c_i|/‖c‖₁ and record
X(i) = sgn(c_i) ‖c‖₁ Tr(P ψ_i). The mean of X is Tr(P ρ) and |X| ≤ ‖c‖₁, so
Hoeffding's inequality fixes the shot count for a given accuracy.
"""

import logging
import math
import sys
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from .enumeration import StateSet
from .errors import MissingTableEntryError
from .pauli_algebra import PauliOperator
from .robustness import PseudoMixture

logger = logging.getLogger(__name__)

DEFAULT_BLOCK = 4096


def plan_samples(l1: float, delta: float, eps: float) -> int:
    """
    Smallest N with N ≥ (2/δ²) L1² ln(2/ε).

    Args:
        l1: L1 norm of the pseudo-mixture (at least 1)
        delta: Additive error
        eps: Failure probability

    Returns:
        Shot count
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if l1 < 1.0 - 1e-9:
        raise ValueError(f"L1 norm of a pseudo-mixture is at least 1, got {l1}")
    bound = 2.0 / delta**2 * l1**2 * math.log(2.0 / eps)
    nearest = round(bound)
    # rounding noise only; anything further above an integer needs the next shot
    if abs(bound - nearest) <= 4 * sys.float_info.epsilon * bound:
        return int(nearest)
    return math.ceil(bound)


@dataclass
class SamplingPlan:
    mixture: PseudoMixture
    observable: PauliOperator
    shots: int
    delta: float
    eps: float
    seed: int = 0

    @classmethod
    def create(
        cls,
        mixture: PseudoMixture,
        observable: PauliOperator,
        delta: float,
        eps: float,
        seed: int = 0,
    ) -> "SamplingPlan":
        return cls(mixture, observable, plan_samples(mixture.l1_norm, delta, eps), delta, eps, seed)

    @property
    def l1(self) -> float:
        return self.mixture.l1_norm

    @property
    def probabilities(self) -> np.ndarray:
        return self.mixture.probabilities

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observable": self.observable.label,
            "l1": self.l1,
            "shots": self.shots,
            "delta": self.delta,
            "eps": self.eps,
            "seed": self.seed,
            "support": len(self.mixture),
        }


class BaseEstimatorBackend(ABC):
    """Source of Tr(P ψ_i) for the sampled states."""

    name = "base"

    @abstractmethod
    def expectations(self, states: StateSet, ids: np.ndarray, pauli: PauliOperator) -> np.ndarray:
        pass


class ClassicalBackend(BaseEstimatorBackend):
    """Exact expectations from the stored Z[ω] amplitudes."""

    name = "classical"

    def expectations(self, states: StateSet, ids: np.ndarray, pauli: PauliOperator) -> np.ndarray:
        p, q, exps = states.exact_expectations([pauli], ids=ids)
        return (p[:, 0] + q[:, 0] * math.sqrt(2.0)) / np.power(2.0, exps.astype(np.float64))


class DeviceBackend(BaseEstimatorBackend):
    """Hook for executing the sampled circuits on hardware."""

    name = "device"

    def expectations(self, states: StateSet, ids: np.ndarray, pauli: PauliOperator) -> np.ndarray:
        raise NotImplementedError("Device execution is not available in this package")


@dataclass
class SampleEstimate:
    mean: float
    shots: int
    bound: float
    max_abs_sample: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _check_ids(plan: SamplingPlan, states: StateSet) -> None:
    ids = plan.mixture.ids
    if len(ids) == 0:
        raise ValueError("Sampling plan has an empty mixture")
    bad = ids[(ids < 0) | (ids >= len(states))]
    if len(bad):
        raise IndexError(f"Mixture ids {bad[:5].tolist()} do not resolve in {states!r}")
    if plan.observable.n != states.n:
        raise ValueError(f"Observable acts on {plan.observable.n} qubits, states on {states.n}")


def payoffs(
    plan: SamplingPlan, states: StateSet, backend: Optional[BaseEstimatorBackend] = None
) -> np.ndarray:
    """X(i) for every entry of the mixture."""
    _check_ids(plan, states)
    backend = backend or ClassicalBackend()
    values = backend.expectations(states, plan.mixture.ids, plan.observable)
    return plan.mixture.signs * plan.l1 * values


def exact_estimator_mean(
    plan: SamplingPlan, states: StateSet, backend: Optional[BaseEstimatorBackend] = None
) -> float:
    """Σ_i p_i X(i), the expectation of one shot; equals Σ_i c_i Tr(P ψ_i)."""
    return float(plan.probabilities @ payoffs(plan, states, backend))


def _block_sum(
    seed_seq: np.random.SeedSequence, size: int, probabilities: np.ndarray, values: np.ndarray
) -> Tuple[float, float]:
    rng = np.random.default_rng(seed_seq)
    draws = rng.choice(len(values), size=size, p=probabilities)
    samples = values[draws]
    return float(samples.sum()), float(np.abs(samples).max())


def estimate(
    plan: SamplingPlan,
    states: StateSet,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    backend: Optional[BaseEstimatorBackend] = None,
) -> SampleEstimate:
    """
    Empirical mean of plan.shots draws of X.

    Shots are cut into fixed blocks, each with its own child seed of
    plan.seed, so the result does not depend on the worker count.

    Args:
        plan: Sampling plan
        states: State set the mixture ids refer to
        workers: Threads drawing blocks in parallel
        block_size: Shots per block
        backend: Expectation source (classical by default)

    Returns:
        SampleEstimate with the mean and the per-shot bound
    """
    if plan.shots < 1:
        raise ValueError(f"Need at least one shot, got {plan.shots}")
    values = payoffs(plan, states, backend)
    probabilities = plan.probabilities

    sizes = [block_size] * (plan.shots // block_size)
    if plan.shots % block_size:
        sizes.append(plan.shots % block_size)
    children = np.random.SeedSequence(plan.seed).spawn(len(sizes))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(
                executor.map(lambda job: _block_sum(job[0], job[1], probabilities, values),
                             zip(children, sizes))
            )
    else:
        results = [_block_sum(child, size, probabilities, values) for child, size in zip(children, sizes)]

    total = math.fsum(s for s, _ in results)
    largest = max(m for _, m in results)
    logger.debug(f"{plan.shots} shots in {len(sizes)} blocks, max |X| {largest:.6f}")
    return SampleEstimate(total / plan.shots, plan.shots, plan.l1, largest)


def coverage(
    plan: SamplingPlan,
    states: StateSet,
    exact: float,
    repetitions: int = 500,
    workers: int = 1,
) -> Tuple[int, float]:
    """
    Repeat the estimate with seeds plan.seed, plan.seed + 1, ... and count misses.

    Returns:
        (failures, failure rate) where a failure is |mean - exact| > δ
    """
    failures = 0
    for r in range(repetitions):
        run = SamplingPlan(plan.mixture, plan.observable, plan.shots, plan.delta, plan.eps, plan.seed + r)
        if abs(estimate(run, states, workers=workers).mean - exact) > plan.delta:
            failures += 1
    return failures, failures / repetitions


def binomial_slack(eps: float, repetitions: int, sigmas: float = 3.0) -> float:
    """eps + sigmas·sqrt(eps(1-eps)/repetitions)."""
    return eps + sigmas * math.sqrt(eps * (1.0 - eps) / repetitions)


def per_t_cost(r1_single: float, r0_block: float, n: int, k: int) -> float:
    """[R_1(ρ)]^k [R_0(ρ^⊗n)]^{1-k/n}: one T gate per single-copy magic state."""
    if n < 1 or k < 0:
        raise ValueError(f"Need n ≥ 1 and k ≥ 0, got n={n}, k={k}")
    return r1_single**k * r0_block ** (1.0 - k / n)


def per_t_table(table: Mapping[Tuple[int, int], float], shape: Mapping[int, int]) -> Dict[Tuple[int, int], float]:
    """
    Grid of per_t_cost values from a robustness table.

    Args:
        table: R_k(ρ^⊗n) keyed by (n, k); needs (1, 1) and (n, 0)
        shape: Largest k to fill for every n

    Returns:
        Per-T costs keyed by (n, k)
    """
    r1 = _entry(table, 1, 1)
    grid = {}
    for n, k_max in shape.items():
        r0 = _entry(table, n, 0)
        for k in range(k_max + 1):
            grid[(n, k)] = per_t_cost(r1, r0, n, k)
    return grid


@dataclass
class StrategyComparison:
    per_t_cost: float
    blocked_cost: float
    winner: str

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _entry(table: Mapping[Tuple[int, int], float], n: int, k: int) -> float:
    try:
        return table[(n, k)]
    except KeyError:
        raise MissingTableEntryError(f"No robustness value for n={n}, k={k}") from None


def compare_strategies(
    budget_k: int,
    block_size: int,
    block_level: int,
    table: Mapping[Tuple[int, int], float],
    tol: float = 1e-9,
) -> StrategyComparison:
    """
    Spend T gates one per single-copy magic state, or k' per n'-copy block.

    Both costs are raised to the number of blocks budget_k / k' (1 when k' = 0),
    so the winner matches the per-block comparison.

    Args:
        budget_k: Total T gates available
        block_size: n', copies per block
        block_level: k', T gates per block
        table: R_k(ρ^⊗n) values keyed by (n, k)

    Returns:
        StrategyComparison with winner "blocked", "per-T" or "tie"
    """
    if block_level > budget_k:
        raise ValueError(f"Block level {block_level} exceeds the budget {budget_k}")
    blocks = budget_k / block_level if block_level else 1.0
    r0 = _entry(table, block_size, 0)
    per_block_t = r0 if block_level == 0 else per_t_cost(_entry(table, 1, 1), r0, block_size, block_level)
    blocked = _entry(table, block_size, block_level)

    per_t = per_block_t**blocks
    blocked_total = blocked**blocks
    if abs(per_t - blocked_total) <= tol:
        winner = "tie"
    else:
        winner = "blocked" if blocked_total < per_t else "per-T"
    return StrategyComparison(per_t, blocked_total, winner)


def sweep_strategies(table: Mapping[Tuple[int, int], float]) -> List[Tuple[Tuple[int, int], StrategyComparison]]:
    """compare_strategies for every (n', k') with 1 ≤ k' present in the table and n' ≥ 2."""
    results = []
    for (n, k) in sorted(table):
        if n < 2 or k < 1 or (n, 0) not in table or (1, 1) not in table:
            continue
        results.append(((n, k), compare_strategies(k, n, k, table)))
    return results
