"""
Exact enumeration of n-qubit Clifford+kT states

Cumulative sets are built layer by layer: every state of level k-1 is hit by
R_P(+π/4) for each non-identity Pauli P, canonicalised, and merged with the
previous level. Stabilizer states (level 0) come from a breadth-first closure
of |0...0⟩ under H, S and CNOT.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from . import cyclotomic as cyc
from .config import Settings
from .errors import BudgetExceededError, DimensionError
from .pauli_algebra import (
    ExactState,
    Gate,
    PauliOperator,
    all_paulis,
    apply_word_batch,
    canonical_form,
    expectations_exact_batch,
    rotate_batch,
)

logger = logging.getLogger(__name__)

CUMULATIVE = "cumulative"
STRICT = "strict"
KINDS = (CUMULATIVE, STRICT)

# Base states expanded per batch; each produces 4^n - 1 candidates.
DEFAULT_CHUNK = 2048


def row_width(n: int) -> int:
    return 1 + 4 * (1 << n)


def bytes_per_state(n: int) -> int:
    """Size of one packed key row in memory."""
    return 8 * row_width(n)


@dataclass(frozen=True, eq=False)
class StateSet:
    """
    A deduplicated set of canonical Clifford+kT states for fixed (n, k).

    States are stored as packed key rows [ℓ, coefficients...] sorted in
    numeric lexicographic order; a state's id is its row position, so ids are
    stable across runs and worker counts.
    """

    n: int
    k: int
    kind: str
    rows: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown state-set kind: {self.kind}")
        rows = np.asarray(self.rows, dtype=np.int64).reshape(-1, row_width(self.n))
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, n: int, k: int, kind: str, rows: np.ndarray) -> "StateSet":
        """Build from arbitrary canonical rows, sorting and deduplicating them."""
        return cls(n, k, kind, cyc.unique_rows(np.asarray(rows, dtype=np.int64)))

    @classmethod
    def from_states(
        cls, n: int, k: int, kind: str, states: Iterable[ExactState]
    ) -> "StateSet":
        rows = [canonical_form(state).row() for state in states]
        if not rows:
            return cls(n, k, kind, np.zeros((0, row_width(n)), dtype=np.int64))
        return cls.from_rows(n, k, kind, np.stack(rows))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[ExactState]:
        for i in range(len(self)):
            yield self.state(i)

    def __repr__(self) -> str:
        return f"StateSet(n={self.n}, k={self.k}, kind={self.kind}, count={len(self)})"

    @property
    def ids(self) -> np.ndarray:
        return np.arange(len(self), dtype=np.int64)

    def state(self, state_id: int) -> ExactState:
        if not 0 <= state_id < len(self):
            raise IndexError(f"State id {state_id} out of range (set has {len(self)})")
        return ExactState.from_row(self.n, self.rows[state_id])

    def arrays(self, ids: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficient array (N, 2^n, 4) and exponents (N,) of the selected states."""
        rows = self.rows if ids is None else self.rows[np.asarray(ids)]
        return cyc.unpack_rows(rows, 1 << self.n)

    def vectors(self, ids: Optional[np.ndarray] = None) -> np.ndarray:
        """Complex amplitudes of shape (N, 2^n)."""
        return cyc.to_complex(*self.arrays(ids))

    def index_of(self, states: Sequence[ExactState]) -> np.ndarray:
        """Ids of the given states; -1 where a state is not a member."""
        if not states:
            return np.zeros(0, dtype=np.int64)
        queries = np.stack([canonical_form(s).row() for s in states])
        return cyc.locate_rows(self.rows, queries)

    def __contains__(self, state: object) -> bool:
        if not isinstance(state, ExactState) or state.n != self.n:
            return False
        return bool(self.index_of([state])[0] >= 0)

    def issubset(self, other: "StateSet") -> bool:
        if self.n != other.n:
            return False
        return bool((cyc.locate_rows(other.rows, self.rows) >= 0).all())

    def same_states(self, other: "StateSet") -> bool:
        return self.n == other.n and np.array_equal(self.rows, other.rows)

    def exact_expectations(
        self,
        paulis: Optional[Sequence[PauliOperator]] = None,
        ids: Optional[np.ndarray] = None,
        chunk_size: int = 65536,
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Exact ⟨ψ|P|ψ⟩ numerators for every selected state.

        Args:
            paulis: Observables (all 4^n by default)
            ids: State ids (all by default)
            chunk_size: States per vectorised batch

        Returns:
            (p, q, exps): value[i, a] = (p[i, a] + q[i, a]√2) / 2^{exps[i]}
        """
        paulis = all_paulis(self.n) if paulis is None else list(paulis)
        ids = self.ids if ids is None else np.asarray(ids, dtype=np.int64)
        p_parts, q_parts = [], []
        for start in range(0, len(ids), chunk_size):
            coeffs, _ = self.arrays(ids[start : start + chunk_size])
            p, q = expectations_exact_batch(coeffs, paulis)
            p_parts.append(p)
            q_parts.append(q)
        if not p_parts:
            empty = np.zeros((0, len(paulis)), dtype=np.int64)
            return empty, empty.copy(), np.zeros(0, dtype=np.int64)
        return np.concatenate(p_parts), np.concatenate(q_parts), self.rows[ids, 0]

    def expectation_matrix(
        self, ids: Optional[np.ndarray] = None, chunk_size: int = 65536
    ) -> np.ndarray:
        """
        Float LP matrix A with A[a, i] = Tr(P_a |ψ_i⟩⟨ψ_i|).

        Returns:
            Array of shape (4^n, N)
        """
        p, q, exps = self.exact_expectations(ids=ids, chunk_size=chunk_size)
        scale = np.power(2.0, -exps.astype(np.float64))
        return ((p + q * cyc.SQRT2) * scale[:, None]).T


def count_cliffords(n: int) -> int:
    """
    Number of n-qubit Clifford gates up to global phase, 2^{n²+2n} ∏_{j=1}^{n} (4^j - 1).

    Args:
        n: Qubit count (at least 1)

    Returns:
        Exact integer count
    """
    if n < 1:
        raise ValueError(f"Qubit count must be positive, got {n}")
    return 2 ** (n * n + 2 * n) * math.prod(4**j - 1 for j in range(1, n + 1))


def count_stabilizer_states(n: int) -> int:
    """2^n ∏_{j=0}^{n-1} (2^{n-j} + 1)."""
    if n < 1:
        raise ValueError(f"Qubit count must be positive, got {n}")
    return 2**n * math.prod(2 ** (n - j) + 1 for j in range(n))


def clifford_generators(n: int) -> List[Gate]:
    """H and S on every qubit plus CNOT on every ordered pair."""
    gates = [Gate("H", (q,)) for q in range(n)] + [Gate("S", (q,)) for q in range(n)]
    gates += [Gate("CNOT", (c, t)) for c in range(n) for t in range(n) if c != t]
    return gates


def enumerate_stabilizer_states(n: int) -> StateSet:
    """
    All n-qubit stabilizer states by breadth-first closure of |0...0⟩.

    Args:
        n: Qubit count

    Returns:
        Cumulative StateSet for k = 0
    """
    if n < 1:
        raise ValueError(f"Qubit count must be positive, got {n}")

    seen = ExactState.zero_state(n).row()[None, :]
    frontier = seen
    generators = clifford_generators(n)
    depth = 0
    while len(frontier):
        coeffs, exps = cyc.unpack_rows(frontier, 1 << n)
        images = []
        for gate in generators:
            out, out_exps = apply_word_batch(coeffs, exps, n, [gate])
            images.append(cyc.pack_rows(out, out_exps))
        candidates = cyc.unique_rows(np.concatenate(images))
        frontier = cyc.rows_difference(candidates, seen)
        seen = cyc.unique_rows(np.concatenate([seen, frontier]))
        depth += 1
        logger.debug(f"Stabilizer closure depth {depth}: {len(seen)} states")

    logger.info(f"Enumerated {len(seen)} stabilizer states for n={n}")
    return StateSet(n, 0, CUMULATIVE, seen)


def _expand_chunk(
    rows: np.ndarray, n: int, angle_signs: Tuple[int, ...]
) -> np.ndarray:
    """Distinct canonical rows of R_P(±π/4)|ψ⟩ over all non-identity P."""
    coeffs, exps = cyc.unpack_rows(rows, 1 << n)
    images = []
    for pauli in all_paulis(n, include_identity=False):
        for sign in angle_signs:
            out, out_exps = rotate_batch(coeffs, exps, pauli, sign)
            images.append(cyc.pack_rows(out, out_exps))
    return cyc.unique_rows(np.concatenate(images))


def project_layer_bytes(n: int, base_count: int, previous_count: Optional[int]) -> int:
    """
    Projected memory for the next cumulative layer.

    The growth factor of the previous layer is reused; without one the
    worst case of 4^n states per base state is assumed.
    """
    if previous_count:
        growth = base_count / previous_count
    else:
        growth = float(4**n)
    return int(math.ceil(base_count * growth)) * bytes_per_state(n)


def check_budget(
    n: int, base_count: int, previous_count: Optional[int], memory_budget_bytes: int
) -> None:
    projected = project_layer_bytes(n, base_count, previous_count)
    if projected > memory_budget_bytes:
        raise BudgetExceededError(
            f"Next layer for n={n} needs about {projected} bytes, "
            f"over the {memory_budget_bytes}-byte memory budget"
        )


def enumerate_clifford_kT(
    n: int,
    k: int,
    base: StateSet,
    workers: int = 1,
    angle_signs: Tuple[int, ...] = (1,),
    chunk_size: int = DEFAULT_CHUNK,
    progress: bool = False,
) -> StateSet:
    """
    Cumulative Clifford+kT states from the cumulative (n, k-1) set.

    Args:
        n: Qubit count
        k: Target level (at least 1)
        base: Cumulative StateSet for (n, k-1)
        workers: Worker processes for the layer expansion
        angle_signs: Rotation signs to apply; (+1,) suffices
        chunk_size: Base states per batch
        progress: Show a progress bar

    Returns:
        Cumulative StateSet for (n, k)
    """
    if k < 1:
        raise ValueError(f"Level must be at least 1, got {k}")
    if base.n != n or base.k != k - 1 or base.kind != CUMULATIVE:
        raise DimensionError(
            f"Base set {base!r} is not the cumulative (n={n}, k={k - 1}) set"
        )

    chunks = [base.rows[i : i + chunk_size] for i in range(0, len(base), chunk_size)]
    bar = tqdm(total=len(chunks), desc=f"n={n} k={k}", unit="chunk", disable=not progress)

    merged = base.rows
    pending: List[np.ndarray] = []

    def absorb(rows: np.ndarray) -> None:
        nonlocal merged, pending
        pending.append(rows)
        if sum(len(p) for p in pending) > 4 * max(len(merged), chunk_size):
            merged = cyc.unique_rows(np.concatenate([merged] + pending))
            pending = []

    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_expand_chunk, chunk, n, tuple(angle_signs))
                for chunk in chunks
            ]
            for future in futures:
                absorb(future.result())
                bar.update(1)
    else:
        for chunk in chunks:
            absorb(_expand_chunk(chunk, n, tuple(angle_signs)))
            bar.update(1)
    bar.close()

    merged = cyc.unique_rows(np.concatenate([merged] + pending))
    logger.info(f"Layer n={n} k={k}: {len(merged)} cumulative states")
    return StateSet(n, k, CUMULATIVE, merged)


def enumerate_layers(
    n: int,
    k_max: int,
    start: Optional[Sequence[StateSet]] = None,
    settings: Optional[Settings] = None,
    angle_signs: Tuple[int, ...] = (1,),
) -> Iterator[StateSet]:
    """
    Yield the cumulative sets for k = 0..k_max, resuming after `start`.

    Args:
        n: Qubit count
        k_max: Last level to produce
        start: Already computed cumulative sets for k = 0..j (not re-yielded)
        settings: Worker count, memory budget and progress flag
        angle_signs: Rotation signs used per layer

    Yields:
        Newly computed cumulative StateSets in increasing k
    """
    settings = settings or Settings()
    if n > settings.max_qubits:
        raise DimensionError(f"n={n} exceeds the configured maximum of {settings.max_qubits} qubits")

    layers = list(start or [])
    if not layers:
        stabilizers = enumerate_stabilizer_states(n)
        layers.append(stabilizers)
        yield stabilizers

    while layers[-1].k < k_max:
        base = layers[-1]
        previous = len(layers[-2]) if len(layers) > 1 else None
        check_budget(n, len(base), previous, settings.memory_budget_bytes)
        layer = enumerate_clifford_kT(
            n,
            base.k + 1,
            base,
            workers=settings.workers,
            angle_signs=angle_signs,
            progress=settings.progress,
        )
        layers.append(layer)
        yield layer


def enumerate_cumulative(
    n: int, k: int, settings: Optional[Settings] = None
) -> List[StateSet]:
    """Cumulative sets for every level 0..k."""
    return list(enumerate_layers(n, k, settings=settings))


def strict_partition(
    cumulative_k: StateSet, cumulative_k_minus_1: Optional[StateSet] = None
) -> StateSet:
    """
    Strict Clifford+kT states: the level-k set minus the level-(k-1) set.

    Args:
        cumulative_k: Cumulative set at level k
        cumulative_k_minus_1: Cumulative set at level k-1 (omit for k = 0)

    Returns:
        Strict StateSet at level k
    """
    if cumulative_k.kind != CUMULATIVE:
        raise ValueError("strict_partition needs a cumulative set")
    if cumulative_k_minus_1 is None:
        if cumulative_k.k != 0:
            raise ValueError(f"Level {cumulative_k.k} needs the level {cumulative_k.k - 1} set")
        return StateSet(cumulative_k.n, 0, STRICT, cumulative_k.rows)
    if cumulative_k_minus_1.n != cumulative_k.n:
        raise DimensionError(
            f"Qubit counts differ: {cumulative_k.n} vs {cumulative_k_minus_1.n}"
        )
    rows = cyc.rows_difference(cumulative_k.rows, cumulative_k_minus_1.rows)
    return StateSet(cumulative_k.n, cumulative_k.k, STRICT, rows)


def _one_qubit_syllable_words(k: int, first: Sequence[str]) -> Iterator[List[str]]:
    """Syllable sequences first · (HT|SHT)^{k-1} in operator order."""
    tails: List[List[str]] = [[]]
    for _ in range(k - 1):
        tails = [tail + [s] for tail in tails for s in ("HT", "SHT")]
    for head in first:
        for tail in tails:
            yield [head] + tail


def _apply_operator_word(state: ExactState, operator_word: str) -> ExactState:
    """Apply an operator-order word over {H, S, T}: rightmost letter acts first."""
    gates = [Gate(letter, (0,)) for letter in reversed(operator_word)]
    coeffs, exps = apply_word_batch(
        state.coeffs[None], np.array([state.denom_exp]), state.n, gates
    )
    return ExactState(state.n, int(exps[0]), coeffs[0])


def _non_computational_stabilizers() -> List[ExactState]:
    """|+⟩, |−⟩, |+i⟩, |−i⟩."""
    zero = ExactState.zero_state(1)
    return [_apply_operator_word(zero, word) for word in ("H", "ZH", "SH", "SSSH")]


def normal_form_states_1q(k: int) -> List[ExactState]:
    """
    One-qubit strict Clifford+kT states from the gate normal form:
    (T | HT | SHT)(HT | SHT)^{k-1} |φ⟩ with |φ⟩ one of |±⟩, |±i⟩.

    Args:
        k: T-count (at least 1)

    Returns:
        The 3·2^{k-1}·4 generated states, canonicalised, in generation order
    """
    if k < 1:
        raise ValueError(f"Level must be at least 1, got {k}")
    seeds = _non_computational_stabilizers()
    states = []
    for syllables in _one_qubit_syllable_words(k, ("T", "HT", "SHT")):
        word = "".join(syllables)
        for seed in seeds:
            states.append(_apply_operator_word(seed, word))
    return states


def normal_form_states_1q_rotations(k: int) -> List[ExactState]:
    """
    One-qubit strict Clifford+kT states as R_{P_k}...R_{P_1}|ψ⟩ with
    P_{i+1} ≠ P_i and |ψ⟩ a stabilizer state that is not a P_1 eigenstate.

    Returns:
        The 6·2^k generated states, canonicalised
    """
    if k < 1:
        raise ValueError(f"Level must be at least 1, got {k}")
    stabilizers = enumerate_stabilizer_states(1)
    paulis = all_paulis(1, include_identity=False)
    sequences: List[List[PauliOperator]] = [[p] for p in paulis]
    for _ in range(k - 1):
        sequences = [seq + [p] for seq in sequences for p in paulis if p != seq[-1]]

    seed_coeffs, seed_exps = stabilizers.arrays()
    states = []
    for seq in sequences:
        p, q, _ = stabilizers.exact_expectations([seq[0]])
        movable = (p[:, 0] == 0) & (q[:, 0] == 0)
        coeffs, exps = seed_coeffs[movable], seed_exps[movable]
        for pauli in seq:
            coeffs, exps = rotate_batch(coeffs, exps, pauli, 1)
        states.extend(ExactState(1, int(e), c) for c, e in zip(coeffs, exps))
    return states
