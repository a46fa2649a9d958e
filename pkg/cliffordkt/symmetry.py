"""
Clifford symmetry groups of a target and the orbit reduction of the LP

A Clifford C acts on Pauli-expectation vectors as a signed permutation:
C P_a C† = s_a P_{π(a)} gives e'[π(a)] = s_a e[a] for ρ' = C ρ C†.
States are grouped into orbits of the group generated by such actions and
every orbit contributes one averaged column Π_G(|ψ⟩⟨ψ|); Pauli rows are
merged along the same action with sign bookkeeping.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from . import cyclotomic as cyc
from .enumeration import CUMULATIVE, StateSet, enumerate_stabilizer_states
from .errors import DimensionError, SymmetryError
from .pauli_algebra import (
    Gate,
    PauliOperator,
    apply_word_batch,
    conjugate_pauli_by_clifford,
    rotate_batch,
    all_paulis,
)

logger = logging.getLogger(__name__)

SYMMETRY_FLAGS = ("perm", "localH", "localSH")


@dataclass(frozen=True)
class SymmetrySpec:
    """Which generator families to include."""

    perm: bool = False
    local_h: bool = False
    local_sh: bool = False

    @classmethod
    def from_flags(cls, flags: Iterable[str]) -> "SymmetrySpec":
        chosen = set()
        for flag in flags:
            if flag not in SYMMETRY_FLAGS:
                raise ValueError(f"Unknown symmetry {flag!r}; choose from {SYMMETRY_FLAGS}")
            chosen.add(flag)
        return cls("perm" in chosen, "localH" in chosen, "localSH" in chosen)

    @property
    def flags(self) -> List[str]:
        return [
            name
            for name, on in zip(SYMMETRY_FLAGS, (self.perm, self.local_h, self.local_sh))
            if on
        ]

    def is_trivial(self) -> bool:
        return not (self.perm or self.local_h or self.local_sh)


@dataclass(frozen=True, eq=False)
class SymmetryElement:
    """A Clifford action: gate word plus its signed permutation of Pauli indices."""

    word: Tuple[Gate, ...]
    perm: np.ndarray
    sign: np.ndarray

    @classmethod
    def from_word(cls, n: int, word: Sequence[Gate]) -> "SymmetryElement":
        perm = np.empty(4**n, dtype=np.int64)
        sign = np.empty(4**n, dtype=np.int64)
        for pauli in all_paulis(n):
            image, s = conjugate_pauli_by_clifford(pauli, word)
            perm[pauli.index] = image.index
            sign[pauli.index] = s
        return cls(tuple(word), perm, sign)

    @classmethod
    def identity(cls, n: int) -> "SymmetryElement":
        return cls((), np.arange(4**n, dtype=np.int64), np.ones(4**n, dtype=np.int64))

    @property
    def key(self) -> bytes:
        return self.perm.tobytes() + self.sign.tobytes()

    def then(self, other: "SymmetryElement") -> "SymmetryElement":
        """Apply self first, then other."""
        return SymmetryElement(
            self.word + other.word,
            other.perm[self.perm],
            self.sign * other.sign[self.perm],
        )

    def act(self, vectors: np.ndarray) -> np.ndarray:
        """Transform expectation vectors along the last axis."""
        out = np.empty_like(vectors)
        out[..., self.perm] = vectors * self.sign
        return out

    def violation(self, expectations: np.ndarray, tol: float = 1e-9) -> Optional[int]:
        """First Pauli index where the action moves the vector, or None."""
        moved = np.abs(self.act(expectations) - expectations) > tol
        if moved.any():
            return int(np.flatnonzero(moved)[0])
        return None


@dataclass(eq=False)
class SymmetryGroup:
    n: int
    spec: SymmetrySpec
    generators: List[SymmetryElement]
    elements: List[SymmetryElement]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def _local_h_candidates(q: int) -> List[Tuple[Gate, ...]]:
    # H itself, or S·X which swaps X and Y and fixes T|+⟩
    return [(Gate("H", (q,)),), (Gate("X", (q,)), Gate("S", (q,)))]


def _generator_candidates(n: int, spec: SymmetrySpec) -> List[List[Tuple[Gate, ...]]]:
    candidates: List[List[Tuple[Gate, ...]]] = []
    if spec.perm:
        for q in range(n - 1):
            swap = (Gate("CNOT", (q, q + 1)), Gate("CNOT", (q + 1, q)), Gate("CNOT", (q, q + 1)))
            candidates.append([swap])
    if spec.local_h:
        candidates.extend(_local_h_candidates(q) for q in range(n))
    if spec.local_sh:
        candidates.extend([(Gate("H", (q,)), Gate("S", (q,)))] for q in range(n))
    return candidates


def build_group(
    n: int,
    spec: SymmetrySpec,
    target_expectations: Optional[np.ndarray] = None,
    tol: float = 1e-9,
) -> SymmetryGroup:
    """
    Close the generators of `spec` into a finite group of signed permutations.

    Args:
        n: Qubit count
        spec: Generator families
        target_expectations: When given, every generator must fix this vector
        tol: Tolerance for the fixing check

    Returns:
        SymmetryGroup with all distinct elements, identity first
    """
    generators: List[SymmetryElement] = []
    for options in _generator_candidates(n, spec):
        chosen = None
        first_violation = None
        for word in options:
            element = SymmetryElement.from_word(n, word)
            if target_expectations is None:
                chosen = element
                break
            bad = element.violation(np.asarray(target_expectations), tol)
            if bad is None:
                chosen = element
                break
            if first_violation is None:
                first_violation = (word, bad)
        if chosen is None:
            assert first_violation is not None
            word, bad = first_violation
            label = PauliOperator.from_index(n, bad).label
            raise SymmetryError(
                f"Generator {' '.join(map(str, word))} does not fix the target "
                f"(Pauli {label})",
                bad,
            )
        generators.append(chosen)

    identity = SymmetryElement.identity(n)
    elements = [identity]
    seen = {identity.key}
    frontier = [identity]
    while frontier:
        grown = []
        for element in frontier:
            for generator in generators:
                product = element.then(generator)
                if product.key not in seen:
                    seen.add(product.key)
                    elements.append(product)
                    grown.append(product)
        frontier = grown

    logger.info(f"Symmetry group {spec.flags or ['trivial']} on {n} qubits has order {len(elements)}")
    return SymmetryGroup(n, spec, generators, elements)


@dataclass
class OrbitTable:
    """
    Orbits of Pauli indices under a group.

    signs[a] relates a G-invariant vector's entries to its orbit
    representative: v[a] = signs[a]·v[representative]. Orbits reachable with
    both signs are cancelled: every invariant vector vanishes there.
    """

    orbit_of: np.ndarray
    signs: np.ndarray
    representatives: np.ndarray
    cancelled: np.ndarray
    orbits: List[np.ndarray] = field(repr=False)

    @property
    def orbit_count(self) -> int:
        return len(self.representatives)

    @property
    def kept_rows(self) -> np.ndarray:
        return self.representatives[~self.cancelled]

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """
        Signed orbit sums over the first axis for every kept orbit.

        Args:
            vectors: Array of shape (4^n,) or (4^n, M)

        Returns:
            Array of shape (kept,) or (kept, M)
        """
        weighted = vectors * (self.signs if vectors.ndim == 1 else self.signs[:, None])
        kept = np.flatnonzero(~self.cancelled)
        out = np.zeros((len(kept),) + vectors.shape[1:])
        slot = np.full(self.orbit_count, -1, dtype=np.int64)
        slot[kept] = np.arange(len(kept))
        rows = slot[self.orbit_of]
        mask = rows >= 0
        np.add.at(out, rows[mask], weighted[mask])
        return out

    def expand_dual(self, y_reduced: np.ndarray) -> np.ndarray:
        """Full 4^n dual vector from a dual on the reduced rows."""
        kept = np.flatnonzero(~self.cancelled)
        slot = np.full(self.orbit_count, -1, dtype=np.int64)
        slot[kept] = np.arange(len(kept))
        rows = slot[self.orbit_of]
        y = np.zeros(len(self.orbit_of))
        mask = rows >= 0
        y[mask] = self.signs[mask] * np.asarray(y_reduced)[rows[mask]]
        return y


def reduced_rows(group: SymmetryGroup) -> OrbitTable:
    """Pauli-index orbits of the group, with cancelled orbits flagged."""
    size = 4**group.n
    orbit_of = np.full(size, -1, dtype=np.int64)
    signs = np.zeros(size, dtype=np.int64)
    representatives: List[int] = []
    cancelled: List[bool] = []
    orbits: List[np.ndarray] = []

    for start in range(size):
        if orbit_of[start] >= 0:
            continue
        label = len(representatives)
        orbit_of[start] = label
        signs[start] = 1
        members = [start]
        conflict = False
        stack = [start]
        while stack:
            a = stack.pop()
            for generator in group.generators:
                b = int(generator.perm[a])
                s = int(generator.sign[a]) * int(signs[a])
                if orbit_of[b] < 0:
                    orbit_of[b] = label
                    signs[b] = s
                    members.append(b)
                    stack.append(b)
                elif signs[b] != s:
                    conflict = True
        representatives.append(start)
        cancelled.append(conflict)
        orbits.append(np.array(sorted(members), dtype=np.int64))

    return OrbitTable(
        orbit_of,
        signs,
        np.array(representatives, dtype=np.int64),
        np.array(cancelled, dtype=bool),
        orbits,
    )


def _key_dtype(magnitude: int) -> np.dtype:
    for dtype in (np.int8, np.int16, np.int32):
        if magnitude <= np.iinfo(dtype).max:
            return np.dtype(dtype)
    return np.dtype(np.int64)


def expectation_keys(states: StateSet, chunk_size: int = 65536) -> np.ndarray:
    """
    Exact expectation vectors at a common denominator 2^L, as rows [p..., q...].

    Two states share a row exactly when their density matrices agree.
    """
    if len(states) == 0:
        return np.zeros((0, 2 * 4**states.n), dtype=np.int8)
    max_exp = int(states.rows[:, 0].max())
    keys = np.empty((len(states), 2 * 4**states.n), dtype=_key_dtype(1 << max_exp))
    for start in range(0, len(states), chunk_size):
        ids = np.arange(start, min(start + chunk_size, len(states)))
        p, q, exps = states.exact_expectations(ids=ids)
        scale = np.left_shift(1, max_exp - exps)[:, None]
        chunk = np.concatenate([p * scale, q * scale], axis=1)
        needed = _key_dtype(int(np.abs(chunk).max()))
        if needed.itemsize > keys.dtype.itemsize:
            keys = keys.astype(needed)
        keys[ids] = chunk
    return keys


def _act_on_keys(element: SymmetryElement, keys: np.ndarray) -> np.ndarray:
    half = keys.shape[1] // 2
    sign = element.sign.astype(keys.dtype)
    out = np.empty_like(keys)
    out[:, element.perm] = keys[:, :half] * sign
    out[:, half + element.perm] = keys[:, half:] * sign
    return out


@dataclass
class SymmetrizedColumns:
    """
    Orbit-averaged columns of a state set.

    `orbit_of[i]` is the column of state i; `representatives[j]` is the
    smallest state id in orbit j.
    """

    representatives: np.ndarray
    orbit_of: np.ndarray
    orbit_sizes: np.ndarray
    columns: np.ndarray

    @property
    def count(self) -> int:
        return len(self.representatives)

    def members(self, orbit: int) -> np.ndarray:
        return np.flatnonzero(self.orbit_of == orbit)


def state_orbits(
    states: StateSet, group: SymmetryGroup, progress: bool = False
) -> np.ndarray:
    """
    Orbit label (minimum member id) of every state.

    Images under each generator are located by exact expectation keys;
    labels are propagated to a fixpoint.
    """
    if states.n != group.n:
        raise DimensionError(f"State set has n={states.n}, group has n={group.n}")
    labels = states.ids.copy()
    if not group.generators or len(states) == 0:
        return labels

    keys = expectation_keys(states)
    images = []
    for generator in tqdm(group.generators, desc="orbit images", disable=not progress):
        image = cyc.locate_rows(keys, _act_on_keys(generator, keys))
        missing = int((image < 0).sum())
        if missing:
            logger.warning(f"{missing} generator images fall outside the state set")
            image = np.where(image < 0, states.ids, image)
        images.append(image)
    del keys

    while True:
        before = labels.copy()
        for image in images:
            np.minimum.at(labels, image, labels)
            np.minimum(labels, labels[image], out=labels)
        labels = labels[labels]
        if np.array_equal(labels, before):
            return labels


def symmetrized_columns(
    states: StateSet,
    group: SymmetryGroup,
    columns: Optional[np.ndarray] = None,
    progress: bool = False,
    chunk_size: int = 65536,
) -> SymmetrizedColumns:
    """
    Group states into G-orbits and average their expectation columns.

    Args:
        states: State set closed under the group
        group: Symmetry group
        columns: Precomputed expectation matrix (4^n, N), optional
        progress: Show a progress bar
        chunk_size: States per block when accumulating orbit sums

    Returns:
        SymmetrizedColumns with one column per orbit
    """
    labels = state_orbits(states, group, progress)
    representatives, orbit_of, sizes = np.unique(labels, return_inverse=True, return_counts=True)
    orbit_of = orbit_of.reshape(-1)

    sums = np.zeros((4**states.n, len(representatives)))
    for start in range(0, len(states), chunk_size):
        ids = np.arange(start, min(start + chunk_size, len(states)))
        block = states.expectation_matrix(ids=ids) if columns is None else columns[:, ids]
        orbits = orbit_of[ids]
        order = np.argsort(orbits, kind="stable")
        present, first = np.unique(orbits[order], return_index=True)
        sums[:, present] += np.add.reduceat(block[:, order], first, axis=1)
    averaged = sums / sizes[None, :]

    logger.info(f"Symmetrised {len(states)} states into {len(representatives)} orbit columns")
    return SymmetrizedColumns(representatives, orbit_of, sizes, averaged)


def expand_orbit(state_rows: np.ndarray, n: int, group: SymmetryGroup) -> np.ndarray:
    """Distinct canonical rows of g|ψ⟩ for all g in the group."""
    coeffs, exps = cyc.unpack_rows(np.atleast_2d(state_rows), 1 << n)
    images = []
    for element in group.elements:
        out, out_exps = apply_word_batch(coeffs, exps, n, element.word)
        images.append(cyc.pack_rows(out, out_exps))
    return cyc.unique_rows(np.concatenate(images))


def orbit_canonical_rows(
    rows: np.ndarray, n: int, group: SymmetryGroup, chunk_size: int = 4096
) -> np.ndarray:
    """Replace every state by the lexicographically smallest row in its orbit."""
    out = np.empty_like(rows)
    for start in range(0, len(rows), chunk_size):
        chunk = rows[start : start + chunk_size]
        coeffs, exps = cyc.unpack_rows(chunk, 1 << n)
        picks = np.arange(len(chunk))
        best = None
        # running minimum keeps one image per state in memory
        for element in group.elements:
            img, img_exps = apply_word_batch(coeffs, exps, n, element.word)
            image = cyc.pack_rows(img, img_exps)
            if best is None:
                best = image
                continue
            pair = np.stack([best, image], axis=1)
            best = pair[picks, cyc.lexmin_index(pair)]
        out[start : start + chunk_size] = best
    return out


def enumerate_representatives(
    n: int,
    k: int,
    group: SymmetryGroup,
    chunk_size: int = 1024,
    progress: bool = False,
) -> List[StateSet]:
    """
    One canonical representative per G-orbit of each cumulative level 0..k.

    Rotations are applied only to representatives, with both rotation signs,
    and the results are mapped to their orbit-minimal rows.

    Returns:
        Representative StateSets for k = 0..k (kind cumulative)
    """
    if group.n != n:
        raise DimensionError(f"Group acts on {group.n} qubits, not {n}")
    base = enumerate_stabilizer_states(n)
    reps = cyc.unique_rows(orbit_canonical_rows(base.rows, n, group))
    levels = [StateSet(n, 0, CUMULATIVE, reps)]

    paulis = all_paulis(n, include_identity=False)
    for level in range(1, k + 1):
        found = [reps]
        bar = tqdm(total=len(reps), desc=f"reps k={level}", disable=not progress)
        for start in range(0, len(reps), chunk_size):
            coeffs, exps = cyc.unpack_rows(reps[start : start + chunk_size], 1 << n)
            for pauli in paulis:
                for sign in (1, -1):
                    out, out_exps = rotate_batch(coeffs, exps, pauli, sign)
                    rows = cyc.unique_rows(cyc.pack_rows(out, out_exps))
                    found.append(cyc.unique_rows(orbit_canonical_rows(rows, n, group)))
            bar.update(min(chunk_size, len(reps) - start))
        bar.close()
        reps = cyc.unique_rows(np.concatenate(found))
        levels.append(StateSet(n, level, CUMULATIVE, reps))
        logger.info(f"Level {level}: {len(reps)} orbit representatives")
    return levels
