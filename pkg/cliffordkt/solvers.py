"""
L1-minimisation (basis pursuit) solvers

    minimise ‖x‖₁ subject to A x = b

is solved in the split form x = u - v, u, v ≥ 0. Its dual

    maximise b·y subject to |Aᵀ y| ≤ 1

supplies the certificate returned with every solution.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Type

import numpy as np
from scipy.optimize import linprog

from .errors import InfeasibleError, SolverError

logger = logging.getLogger(__name__)


@dataclass
class LPSolution:
    """Primal x, dual y and solver statistics of one L1 problem."""

    x: np.ndarray
    y: np.ndarray
    value: float
    dual_value: float
    iterations: int
    status: str
    backend: str
    time_ms: float = 0.0

    @property
    def duality_gap(self) -> float:
        return self.value - self.dual_value


class BaseLPSolver(ABC):
    """Base class for L1 solvers."""

    name = "base"

    def __init__(
        self,
        primal_tol: float = 1e-8,
        dual_tol: float = 1e-9,
        max_iterations: int = 100000,
    ):
        self.primal_tol = primal_tol
        self.dual_tol = dual_tol
        self.max_iterations = max_iterations

    @abstractmethod
    def _solve(self, A: np.ndarray, b: np.ndarray) -> LPSolution:
        pass

    def solve_l1(self, A: np.ndarray, b: np.ndarray) -> LPSolution:
        """
        Solve min ‖x‖₁ s.t. A x = b.

        Args:
            A: Constraint matrix of shape (m, N)
            b: Right-hand side of shape (m,)

        Returns:
            LPSolution with primal and dual vectors
        """
        A = np.asarray(A, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if A.ndim != 2 or b.shape != (A.shape[0],):
            raise ValueError(f"Incompatible shapes A{A.shape} and b{b.shape}")

        start = time.perf_counter()
        solution = self._solve(A, b)
        solution.time_ms = (time.perf_counter() - start) * 1000.0
        logger.info(
            f"{self.name}: value {solution.value:.10f}, gap {solution.duality_gap:.2e}, "
            f"{solution.iterations} iterations on {A.shape[0]}x{A.shape[1]}"
        )
        return solution


class HighsSolver(BaseLPSolver):
    """HiGHS through scipy.optimize.linprog; duals from the equality marginals."""

    name = "highs"

    def __init__(self, method: str = "highs-ds", **kwargs):
        super().__init__(**kwargs)
        self.method = method

    def _solve(self, A: np.ndarray, b: np.ndarray) -> LPSolution:
        m, n_cols = A.shape
        result = linprog(
            np.ones(2 * n_cols),
            A_eq=np.hstack([A, -A]),
            b_eq=b,
            bounds=(0, None),
            method=self.method,
            options={
                "primal_feasibility_tolerance": self.primal_tol,
                "dual_feasibility_tolerance": self.dual_tol,
                "maxiter": self.max_iterations,
            },
        )
        if result.status == 2:
            raise InfeasibleError(f"Target is outside the span of the columns: {result.message}")
        if result.status == 1:
            raise SolverError(f"HiGHS hit the iteration limit: {result.message}")
        if result.status != 0:
            raise SolverError(f"HiGHS failed (status {result.status}): {result.message}")

        x = result.x[:n_cols] - result.x[n_cols:]
        y = np.asarray(result.eqlin.marginals, dtype=np.float64)
        return LPSolution(
            x=x,
            y=y,
            value=float(np.abs(x).sum()),
            dual_value=float(b @ y),
            iterations=int(result.nit),
            status="optimal",
            backend=self.name,
        )


class RevisedSimplexSolver(BaseLPSolver):
    """
    Dense two-phase revised simplex on the split formulation.

    Pricing is Dantzig's rule, switching to Bland's rule after a run of
    degenerate pivots; ratio-test ties go to the lowest basic column. The
    basis inverse is updated in product form and refactorised periodically.
    """

    name = "simplex"
    refactor_every = 64
    degenerate_limit = 50

    def _solve(self, A: np.ndarray, b: np.ndarray) -> LPSolution:
        m_orig, n_cols = A.shape

        # Zero rows carry no constraint unless b is nonzero there.
        live = np.abs(A).max(axis=1) > 0 if n_cols else np.zeros(m_orig, dtype=bool)
        if np.any(np.abs(b[~live]) > self.primal_tol):
            raise InfeasibleError("Target has weight on a row no column touches")
        rows = np.flatnonzero(live)
        signs = np.where(b[rows] < 0, -1.0, 1.0)
        A_work = A[rows] * signs[:, None]
        b_work = b[rows] * signs

        full = np.hstack([A_work, -A_work])
        cost = np.ones(2 * n_cols)
        m = len(rows)

        # phase 1: artificial basis
        tableau = np.hstack([full, np.eye(m)])
        phase1_cost = np.concatenate([np.zeros(2 * n_cols), np.ones(m)])
        basis = list(range(2 * n_cols, 2 * n_cols + m))
        iterations = 0

        basis, iterations = self._iterate(tableau, b_work, phase1_cost, basis, iterations)
        binv = np.linalg.inv(tableau[:, basis])
        x_basis = binv @ b_work
        infeasibility = float(phase1_cost[basis] @ x_basis)
        if infeasibility > self.primal_tol * max(1.0, float(np.abs(b_work).sum())):
            raise InfeasibleError(
                f"Target is outside the span of the columns (residual {infeasibility:.3e})"
            )

        basis, keep = self._drive_out_artificials(tableau, basis, 2 * n_cols)
        tableau = tableau[keep][:, : 2 * n_cols]
        b_work = b_work[keep]
        if len(keep) < m:
            logger.debug(f"Removed {m - len(keep)} redundant rows")

        basis, iterations = self._iterate(tableau, b_work, cost, basis, iterations)
        binv = np.linalg.inv(tableau[:, basis])
        x_basis = binv @ b_work
        y_work = cost[basis] @ binv

        z = np.zeros(2 * n_cols)
        z[basis] = np.maximum(x_basis, 0.0)
        x = z[:n_cols] - z[n_cols:]

        y = np.zeros(m_orig)
        y[rows[keep]] = y_work * signs[keep]
        return LPSolution(
            x=x,
            y=y,
            value=float(np.abs(x).sum()),
            dual_value=float(b @ y),
            iterations=iterations,
            status="optimal",
            backend=self.name,
        )

    def _iterate(
        self,
        matrix: np.ndarray,
        rhs: np.ndarray,
        cost: np.ndarray,
        basis: List[int],
        iterations: int,
    ):
        binv = np.linalg.inv(matrix[:, basis])
        x_basis = binv @ rhs
        degenerate_run = 0
        since_refactor = 0

        while True:
            if iterations >= self.max_iterations:
                raise SolverError(f"Simplex hit the iteration limit of {self.max_iterations}")

            y = cost[basis] @ binv
            reduced = cost - y @ matrix
            reduced[basis] = 0.0
            candidates = np.flatnonzero(reduced < -self.dual_tol)
            if len(candidates) == 0:
                return basis, iterations

            if degenerate_run >= self.degenerate_limit:
                entering = int(candidates[0])
            else:
                entering = int(candidates[np.argmin(reduced[candidates])])

            direction = binv @ matrix[:, entering]
            positive = direction > self.primal_tol
            if not positive.any():
                raise SolverError("L1 problem reported unbounded")
            ratios = np.full(len(basis), np.inf)
            ratios[positive] = np.maximum(x_basis[positive], 0.0) / direction[positive]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12)
            leaving = int(ties[np.argmin(np.asarray(basis)[ties])])

            degenerate_run = degenerate_run + 1 if best <= self.primal_tol else 0

            pivot = direction[leaving]
            eta = -direction / pivot
            eta[leaving] = 1.0 / pivot
            binv_row = binv[leaving].copy()
            binv += np.outer(eta, binv_row)
            binv[leaving] = binv_row / pivot
            basis[leaving] = entering
            iterations += 1
            since_refactor += 1

            if since_refactor >= self.refactor_every:
                binv = np.linalg.inv(matrix[:, basis])
                since_refactor = 0
            x_basis = binv @ rhs

    def _drive_out_artificials(self, matrix: np.ndarray, basis: List[int], n_real: int):
        """Pivot zero-level artificials out of the basis; rows where that fails are redundant."""
        binv = np.linalg.inv(matrix[:, basis])
        keep = list(range(len(basis)))
        for row in range(len(basis)):
            if basis[row] < n_real:
                continue
            row_values = binv[row] @ matrix[:, :n_real]
            row_values[[j for j in basis if j < n_real]] = 0.0
            nonzero = np.flatnonzero(np.abs(row_values) > 1e-9)
            if len(nonzero):
                basis[row] = int(nonzero[0])
                binv = np.linalg.inv(matrix[:, basis])
            else:
                keep.remove(row)
        basis = [basis[row] for row in keep]
        return basis, np.array(keep, dtype=np.int64)


SOLVERS: Dict[str, Type[BaseLPSolver]] = {
    "highs": HighsSolver,
    "simplex": RevisedSimplexSolver,
}


def get_solver(
    name: str = "highs",
    primal_tol: float = 1e-8,
    dual_tol: float = 1e-9,
    max_iterations: int = 100000,
) -> BaseLPSolver:
    """
    Instantiate a solver backend by name.

    Args:
        name: "highs" or "simplex"

    Returns:
        Configured solver
    """
    try:
        solver_class = SOLVERS[name.lower()]
    except KeyError:
        raise ValueError(f"Unknown solver {name!r}; choose from {sorted(SOLVERS)}") from None
    return solver_class(primal_tol=primal_tol, dual_tol=dual_tol, max_iterations=max_iterations)
