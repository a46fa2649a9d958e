"""
Clifford+kT robustness: assembly and solution of the basis-pursuit LP

R_k(ρ) = min Σ|c_i| over pseudo-mixtures ρ = Σ c_i |ψ_i⟩⟨ψ_i| of Clifford+kT
states. In Pauli coordinates this is min ‖c‖₁ subject to A c = b with
A[a, i] = Tr(P_a ψ_i) and b_a = Tr(P_a ρ).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import cyclotomic as cyc
from .config import Settings
from .enumeration import StateSet, enumerate_cumulative
from .errors import BudgetExceededError, DimensionError
from .solvers import BaseLPSolver, LPSolution, get_solver
from .symmetry import (
    OrbitTable,
    SymmetryGroup,
    SymmetrySpec,
    build_group,
    enumerate_representatives,
    expand_orbit,
    reduced_rows,
    symmetrized_columns,
)
from .targets import TargetState

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
INCONVERTIBLE = "inconvertible"
UNDETERMINED = "undetermined"


@dataclass
class PseudoMixture:
    """Signed coefficients over state ids of a StateSet; they sum to one."""

    ids: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if self.ids.shape != self.coefficients.shape:
            raise ValueError("ids and coefficients must have the same length")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def total(self) -> float:
        return float(self.coefficients.sum())

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.coefficients).sum())

    @property
    def negativity(self) -> float:
        """Total weight of negative coefficients; equals (‖c‖₁ - 1)/2."""
        return float(-self.coefficients[self.coefficients < 0].sum())

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) / self.l1_norm

    @property
    def signs(self) -> np.ndarray:
        return np.sign(self.coefficients)

    def to_list(self) -> List[Dict[str, Any]]:
        return [
            {"state_id": int(i), "coeff": float(c)}
            for i, c in zip(self.ids, self.coefficients)
        ]


@dataclass
class LPProblem:
    """
    Basis-pursuit data for one target and one (possibly reduced) state set.

    Column j stands for every state i with state_column[i] == j; the
    column is the common symmetrised expectation vector of those states.
    """

    A: np.ndarray
    b: np.ndarray
    state_column: np.ndarray
    column_sizes: np.ndarray
    rows: Optional[OrbitTable] = None
    symmetry: List[str] = field(default_factory=list)
    state_count: int = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.A.shape


@dataclass
class RobustnessResult:
    target: str
    n: int
    k: int
    value: float
    decomposition: PseudoMixture
    dual: np.ndarray
    dual_value: float
    lower_bound: float
    symmetry: List[str] = field(default_factory=list)
    iterations: int = 0
    time_ms: float = 0.0
    backend: str = ""
    columns: int = 0
    states: int = 0
    symbolic_hint: Optional[str] = None
    # set when decomposition ids index the touched orbits rather than the input set
    support: Optional[StateSet] = None

    @property
    def duality_gap(self) -> float:
        return self.value - self.dual_value

    @property
    def negativity(self) -> float:
        return (self.value - 1.0) / 2.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "n": self.n,
            "k": self.k,
            "symmetry": self.symmetry,
            "value": self.value,
            "lower_bound": self.lower_bound,
            "duality_gap": self.duality_gap,
            "negativity": self.negativity,
            "decomposition": self.decomposition.to_list(),
            "symbolic_hint": self.symbolic_hint,
            "solver": {
                "iterations": self.iterations,
                "time_ms": self.time_ms,
                "backend": self.backend,
            },
            "columns": self.columns,
            "states": self.states,
            "state_ids": "support" if self.support is not None else "states",
        }


def _merge_duplicate_columns(
    A: np.ndarray, state_column: np.ndarray, decimals: int = 12
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rounded = np.round(A, decimals) + 0.0
    _, first, inverse = np.unique(rounded.T, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # keep merged columns in order of first appearance
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    merged = A[:, first[order]]
    new_state_column = relabel[inverse][state_column]
    sizes = np.bincount(new_state_column, minlength=merged.shape[1])
    return merged, new_state_column, sizes


def assemble_problem(
    target: TargetState,
    states: StateSet,
    group: Optional[SymmetryGroup] = None,
    representatives: bool = False,
    progress: bool = False,
) -> LPProblem:
    """
    Build the LP for a target against a state set.

    Args:
        target: Target expectations
        states: Candidate states (or orbit representatives)
        group: Symmetry group fixing the target, optional
        representatives: `states` holds one state per orbit rather than whole orbits
        progress: Show progress bars

    Returns:
        LPProblem with duplicate columns merged
    """
    if target.n != states.n:
        raise DimensionError(f"Target has n={target.n}, states have n={states.n}")

    trivial = group is None or group.order == 1
    if trivial:
        A = states.expectation_matrix()
        state_column = states.ids
        rows = None
    elif representatives:
        raw = states.expectation_matrix()
        A = np.zeros_like(raw)
        for element in group.elements:
            A += element.act(raw.T).T
        A /= group.order
        state_column = states.ids
        rows = reduced_rows(group)
    else:
        sym = symmetrized_columns(states, group, progress=progress)
        A = sym.columns
        state_column = sym.orbit_of
        rows = reduced_rows(group)

    b = target.expectations
    if rows is not None:
        A = rows.reduce(A)
        b = rows.reduce(b)

    A, state_column, sizes = _merge_duplicate_columns(A, state_column)
    flags = group.spec.flags if group is not None else []
    logger.info(
        f"LP for {target.provenance or 'target'}: {A.shape[0]} rows, {A.shape[1]} columns "
        f"from {len(states)} states"
    )
    return LPProblem(A, b, state_column, sizes, rows, flags, len(states))


def lower_bound(target: TargetState, k: int) -> float:
    """R_k(ρ) ≥ Σ_a |Tr(P_a ρ)| / (2^n (√2)^k)."""
    if k < 0:
        raise ValueError(f"Level must be nonnegative, got {k}")
    return float(np.abs(target.expectations).sum()) / (2**target.n * SQRT2**k)


def lower_bound_certificate(target: TargetState, k: int) -> np.ndarray:
    """
    Dual vector y_a = sgn(b_a) / (2^n (√2)^k) attaining lower_bound.

    Feasible because Σ_a |Tr(P_a ψ)| ≤ 2^n (√2)^k for every Clifford+kT state.
    """
    return np.sign(target.expectations) / (2**target.n * SQRT2**k)


def lower_bound_ceiling(n: int, k: int) -> float:
    """The lower bound can never exceed (√2)^{n-k}."""
    return SQRT2 ** (n - k)


def growth_threshold(family: str) -> float:
    """
    Ratio k/n below which the lower bound for |H⟩^⊗n or |SH⟩^⊗n grows exponentially.

    Args:
        family: "H" or "SH"

    Returns:
        2 log₂((1+√2)/2) for H, 2 log₂((1+√3)/2) for SH
    """
    roots = {"H": SQRT2, "SH": math.sqrt(3.0)}
    try:
        root = roots[family.upper()]
    except KeyError:
        raise ValueError(f"Unknown family {family!r}; choose H or SH") from None
    return 2.0 * math.log2((1.0 + root) / 2.0)


def pauli_l1_ceiling(states: StateSet, chunk_size: int = 65536) -> Tuple[float, float]:
    """
    Largest Σ_a |Tr(P_a ψ)| over the set and its ceiling 2^n (√2)^k.

    Returns:
        (observed maximum, ceiling)
    """
    observed = 0.0
    for start in range(0, len(states), chunk_size):
        ids = np.arange(start, min(start + chunk_size, len(states)))
        block = states.expectation_matrix(ids=ids)
        observed = max(observed, float(np.abs(block).sum(axis=0).max()))
    return observed, 2**states.n * SQRT2**states.k


def t_channel_decomposition() -> List[Tuple[float, str]]:
    """
    T ρ T† = ½ ρ + (1/√2) S ρ S† + (½ - 1/√2) Z ρ Z†.

    Returns:
        (weight, Clifford) pairs with L1 weight √2
    """
    return [(0.5, "I"), (1.0 / SQRT2, "S"), (0.5 - 1.0 / SQRT2, "Z")]


def solve_robustness(
    target: TargetState,
    problem: LPProblem,
    k: int,
    solver: Optional[BaseLPSolver] = None,
    tol: float = 1e-8,
) -> RobustnessResult:
    """
    Solve the LP and expand the optimum to a state-level pseudo-mixture.

    Args:
        target: Target the problem was assembled for
        problem: Assembled LP
        k: T-level of the state set (for the lower bound and metadata)
        solver: LP backend (HiGHS by default)
        tol: Residual above which a warning is logged

    Returns:
        RobustnessResult with decomposition, dual certificate and bounds
    """
    solver = solver or get_solver("highs")
    solution: LPSolution = solver.solve_l1(problem.A, problem.b)

    residual = float(np.abs(problem.A @ solution.x - problem.b).max())
    if residual > tol:
        logger.warning(f"Primal residual {residual:.2e} exceeds {tol:.0e}")

    support = np.flatnonzero(np.abs(solution.x) > 1e-12)
    ids: List[np.ndarray] = []
    coeffs: List[np.ndarray] = []
    if len(support):
        in_support = np.isin(problem.state_column, support)
        member_ids = np.flatnonzero(in_support)
        member_cols = problem.state_column[member_ids]
        ids.append(member_ids)
        coeffs.append(solution.x[member_cols] / problem.column_sizes[member_cols])
    mixture = PseudoMixture(
        np.concatenate(ids) if ids else np.zeros(0, dtype=np.int64),
        np.concatenate(coeffs) if coeffs else np.zeros(0),
    )

    dual = solution.y if problem.rows is None else problem.rows.expand_dual(solution.y)
    bound = lower_bound(target, k)
    value = solution.value
    if bound > value + 1e-9:
        logger.warning(f"Lower bound {bound} exceeds the solved value {value}")

    return RobustnessResult(
        target=target.provenance,
        n=target.n,
        k=k,
        value=value,
        decomposition=mixture,
        dual=dual,
        dual_value=solution.dual_value,
        lower_bound=bound,
        symmetry=list(problem.symmetry),
        iterations=solution.iterations,
        time_ms=solution.time_ms,
        backend=solution.backend,
        columns=problem.A.shape[1],
        states=problem.state_count,
        symbolic_hint=symbolic_hint(value),
    )


def robustness(
    target: TargetState,
    k: int,
    states: Optional[StateSet] = None,
    symmetry: Optional[SymmetrySpec] = None,
    settings: Optional[Settings] = None,
    fast_path: bool = False,
) -> RobustnessResult:
    """
    R_k of a target, enumerating the cumulative state set when none is given.

    Args:
        target: Target state
        k: T-level
        states: Cumulative (n, k) set; enumerated when omitted
        symmetry: Symmetry generators to exploit
        settings: Solver choice, tolerances, workers
        fast_path: Enumerate orbit representatives directly (needs a symmetry)

    Returns:
        RobustnessResult; on the fast path its decomposition ids index
        `result.support`, the states of every orbit in the optimum
    """
    settings = settings or Settings()
    solver = get_solver(
        settings.solver,
        primal_tol=settings.primal_tol,
        dual_tol=settings.dual_tol,
        max_iterations=settings.max_iterations,
    )
    group = None
    if symmetry is not None and not symmetry.is_trivial():
        group = build_group(target.n, symmetry, target.expectations)

    if fast_path and group is not None and states is None:
        reps = enumerate_representatives(target.n, k, group, progress=settings.progress)[-1]
        problem = assemble_problem(target, reps, group, representatives=True)
        result = solve_robustness(target, problem, k, solver, tol=settings.primal_tol)
        result.decomposition, result.support = expand_representatives(result.decomposition, reps, group)
        return result

    if states is None:
        if target.n > settings.max_qubits:
            raise DimensionError(f"n={target.n} exceeds the maximum of {settings.max_qubits}")
        states = enumerate_cumulative(target.n, k, settings)[-1]
    if states.k != k:
        logger.warning(f"State set is level {states.k}, reporting it as level {k}")
    problem = assemble_problem(target, states, group, progress=settings.progress)
    return solve_robustness(target, problem, k, solver, tol=settings.primal_tol)


def expand_representatives(
    mixture: PseudoMixture, reps: StateSet, group: SymmetryGroup
) -> Tuple[PseudoMixture, StateSet]:
    """
    Spread each representative's weight evenly over its orbit.

    A representative's symmetrised column is the mean of its orbit members'
    columns, so weight c becomes c/|orbit| on every member.

    Args:
        mixture: Decomposition over representative ids
        reps: The representative StateSet the ids refer to
        group: Group the representatives were taken under

    Returns:
        (mixture over support ids, support StateSet holding the touched orbits)
    """
    if len(mixture) == 0:
        return mixture, StateSet(reps.n, reps.k, reps.kind, reps.rows[:0])
    orbits = [expand_orbit(reps.rows[i], reps.n, group) for i in mixture.ids]
    support = StateSet.from_rows(reps.n, reps.k, reps.kind, np.concatenate(orbits))
    coefficients = np.zeros(len(support))
    for orbit, c in zip(orbits, mixture.coefficients):
        np.add.at(coefficients, cyc.locate_rows(support.rows, orbit), c / len(orbit))
    return PseudoMixture(support.ids, coefficients), support


def convertibility_check(r_source: float, r_target: float, tol: float = 1e-9) -> str:
    """
    Clifford+ΔkT convertibility from R_k(source) and R_{k+Δk}(target).

    Returns:
        "inconvertible" when R_{k+Δk}(target) > R_k(source) + tol, else
        "undetermined"; convertibility is never claimed
    """
    return INCONVERTIBLE if r_target > r_source + tol else UNDETERMINED


@dataclass
class SynthesisVerdict:
    verdict: str
    k: int
    delta_k: int
    t_gates: int
    gate_value: float
    resource_value: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def synthesis_check(
    r_gate: float, r_resource: float, k: int, delta_k: int, t_gates: int, tol: float = 1e-9
) -> SynthesisVerdict:
    """
    Minimum T-gate test for an n-qubit gate U.

    If R_{k+Δk}(U|+⟩^⊗n) > R_k((T|+⟩)^⊗(t_gates-Δk)), U cannot be synthesised
    with only `t_gates` T gates.

    Args:
        r_gate: R_{k+Δk}(U|+⟩^⊗n)
        r_resource: R_k((T|+⟩)^⊗(t_gates - Δk))
        k: Level of the resource robustness
        delta_k: Extra T gates allowed in the channel (0 ≤ Δk ≤ t_gates)
        t_gates: Candidate T-gate budget

    Returns:
        SynthesisVerdict with verdict "inconvertible" (not synthesisable) or "undetermined"
    """
    if not 0 <= delta_k <= t_gates:
        raise ValueError(f"Need 0 ≤ Δk ≤ t_gates, got Δk={delta_k}, t_gates={t_gates}")
    verdict = convertibility_check(r_resource, r_gate, tol)
    return SynthesisVerdict(verdict, k, delta_k, t_gates, r_gate, r_resource)


CostPart = Tuple[Union[RobustnessResult, Tuple[float, int]], int]


def product_cost(parts: Sequence[CostPart], k_budget: Optional[int] = None) -> float:
    """
    Sampling cost Π_i R_{k_i}(ρ_i)^{m_i} of a tensor-product decomposition.

    Args:
        parts: (result or (value, k), multiplicity) pairs
        k_budget: Total T-level allowed, Σ k_i m_i

    Returns:
        The product of the component robustness values
    """
    cost = 1.0
    used = 0
    for part, multiplicity in parts:
        if multiplicity < 0:
            raise ValueError(f"Multiplicity must be nonnegative, got {multiplicity}")
        value, level = (part.value, part.k) if isinstance(part, RobustnessResult) else part
        cost *= value**multiplicity
        used += level * multiplicity
    if k_budget is not None and used > k_budget:
        raise BudgetExceededError(f"Decomposition uses {used} T levels, budget is {k_budget}")
    return cost


@dataclass
class ProductMixture:
    """Tensor product of component pseudo-mixtures; entry j uses ids[j] of each component."""

    ids: np.ndarray
    coefficients: np.ndarray

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.coefficients).sum())


def product_mixture(components: Sequence[PseudoMixture]) -> ProductMixture:
    """Coefficients c_{i1} c_{i2} ... of the product decomposition."""
    if not components:
        return ProductMixture(np.zeros((1, 0), dtype=np.int64), np.ones(1))
    grids = np.meshgrid(*[np.arange(len(c)) for c in components], indexing="ij")
    index = np.stack([g.reshape(-1) for g in grids], axis=1)
    ids = np.stack([components[j].ids[index[:, j]] for j in range(len(components))], axis=1)
    coefficients = np.prod(
        [components[j].coefficients[index[:, j]] for j in range(len(components))], axis=0
    )
    return ProductMixture(ids, coefficients)


def _format_surd(p: int, q: int, r: int, root: int) -> str:
    surd = f"√{root}"
    if q == 0:
        numerator = f"{p}"
    elif p == 0:
        numerator = f"{'-' if q < 0 else ''}{'' if abs(q) == 1 else abs(q)}{surd}"
    else:
        sign = "-" if q < 0 else "+"
        coefficient = "" if abs(q) == 1 else str(abs(q))
        numerator = f"{p} {sign} {coefficient}{surd}"
    if r == 1:
        return numerator
    return f"({numerator})/{r}"


def symbolic_hint(value: float, bound: int = 512, tol: float = 1e-9) -> Optional[str]:
    """
    Look for (p + q√2)/r or (p + q√3)/r with |p|, |q|, r ≤ bound matching value.

    The smallest denominator wins, then the smallest |q|. Annotation only.
    """
    if not math.isfinite(value):
        return None
    q = np.arange(-bound, bound + 1)
    q = q[np.argsort(np.abs(q), kind="stable")]
    for r in range(1, bound + 1):
        for root in (2, 3):
            p = np.rint(value * r - q * math.sqrt(root))
            ok = (np.abs(p) <= bound) & (np.abs((p + q * math.sqrt(root)) / r - value) < tol)
            if ok.any():
                j = int(np.flatnonzero(ok)[0])
                pj, qj = int(p[j]), int(q[j])
                g = math.gcd(math.gcd(abs(pj), abs(qj)), r)
                return _format_surd(pj // g, qj // g, r // g, root)
    return None
