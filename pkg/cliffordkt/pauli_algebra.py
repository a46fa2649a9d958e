"""
Pauli operators, Clifford generators and π/4 Pauli rotations on exact state vectors

Qubit 0 is the most significant bit of a computational-basis index, so
|q0 q1 ... q_{n-1}⟩ has index Σ q_i 2^{n-1-i} and tensor products are plain
Kronecker products. Pauli indices use one base-4 digit per qubit in the same
order with I=0, X=1, Y=2, Z=3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from . import cyclotomic as cyc
from .cyclotomic import ExactAmplitude, ExactReal
from .errors import DimensionError, ParseError

CLIFFORD_GATES = ("H", "S", "CNOT", "X", "Y", "Z")
SINGLE_QUBIT_GATES = ("H", "S", "T", "X", "Y", "Z")

_DIGIT_OF_BITS = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_BITS_OF_DIGIT = {v: k for k, v in _DIGIT_OF_BITS.items()}
_LETTERS = "IXYZ"


@dataclass(frozen=True)
class PauliOperator:
    """
    An n-qubit Pauli operator without phase.

    Per qubit the operator is X^x Z^z, except that x = z = 1 denotes Y itself
    (Y = iXZ), so no phase is ever stored.
    """

    n: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Qubit count must be positive, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise IndexError(f"Bit strings out of range for {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliOperator":
        if not 0 <= index < 4**n:
            raise IndexError(f"Pauli index {index} out of range for {n} qubits")
        x_bits = z_bits = 0
        for q in range(n):
            digit = (index >> (2 * (n - 1 - q))) & 3
            x, z = _BITS_OF_DIGIT[digit]
            x_bits |= x << (n - 1 - q)
            z_bits |= z << (n - 1 - q)
        return cls(n, x_bits, z_bits)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse a label such as "XIZ" (qubit 0 first)."""
        label = label.strip().upper()
        if not label or any(ch not in _LETTERS for ch in label):
            raise ParseError(f"Invalid Pauli label: {label!r}")
        n = len(label)
        index = 0
        for ch in label:
            index = index * 4 + _LETTERS.index(ch)
        return cls.from_index(n, index)

    @property
    def index(self) -> int:
        index = 0
        for q in range(self.n):
            shift = self.n - 1 - q
            index = index * 4 + _DIGIT_OF_BITS[
                ((self.x_bits >> shift) & 1, (self.z_bits >> shift) & 1)
            ]
        return index

    @property
    def label(self) -> str:
        return "".join(
            _LETTERS[_DIGIT_OF_BITS[((self.x_bits >> s) & 1, (self.z_bits >> s) & 1)]]
            for s in range(self.n - 1, -1, -1)
        )

    @property
    def weight(self) -> int:
        return bin(self.x_bits | self.z_bits).count("1")

    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def basis_action(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        P|j⟩ = ω^{m_j} |j ⊕ x⟩ for every basis index j.

        Returns:
            (targets j ⊕ x, ω-exponents m_j) as int64 arrays of length 2^n
        """
        return _basis_action(self.n, self.x_bits, self.z_bits)

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=4096)
def _basis_action(n: int, x_bits: int, z_bits: int) -> Tuple[np.ndarray, np.ndarray]:
    j = np.arange(1 << n, dtype=np.int64)
    parity = np.array([bin(v & z_bits).count("1") & 1 for v in range(1 << n)])
    y_count = bin(x_bits & z_bits).count("1")
    exponents = (2 * y_count + 4 * parity) % 8
    targets = j ^ x_bits
    targets.setflags(write=False)
    exponents.setflags(write=False)
    return targets, exponents.astype(np.int64)


def all_paulis(n: int, include_identity: bool = True) -> List[PauliOperator]:
    """All 4^n Pauli operators in index order."""
    start = 0 if include_identity else 1
    return [PauliOperator.from_index(n, a) for a in range(start, 4**n)]


class Gate(NamedTuple):
    """One gate of a word; words apply their gates first to last."""

    name: str
    qubits: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.name}{','.join(str(q) for q in self.qubits)}"


Word = Sequence[Gate]

_GATE_TOKEN = re.compile(r"(CNOT|H|S|T|X|Y|Z)(\d+(?:,\d+)?)")


def parse_word(text: str) -> Tuple[Gate, ...]:
    """
    Parse a whitespace separated gate word such as "H0 S1 CNOT0,1".

    Args:
        text: Gate tokens in application order

    Returns:
        Tuple of gates
    """
    gates = []
    offset = 0
    for token in text.split():
        offset = text.index(token, offset)
        match = _GATE_TOKEN.fullmatch(token.upper())
        if match is None:
            raise ParseError(f"Invalid gate token {token!r}", offset)
        qubits = tuple(int(q) for q in match.group(2).split(","))
        name = match.group(1)
        if (name == "CNOT") != (len(qubits) == 2):
            raise ParseError(f"Wrong number of qubits in {token!r}", offset)
        gates.append(Gate(name, qubits))
        offset += len(token)
    return tuple(gates)


def invert_word(word: Word) -> Tuple[Gate, ...]:
    """Word of the inverse unitary (up to global phase)."""
    inverse: List[Gate] = []
    for gate in reversed(list(word)):
        if gate.name == "S":
            inverse.extend([gate] * 3)
        elif gate.name == "T":
            inverse.extend([gate] * 7)
        else:
            inverse.append(gate)
    return tuple(inverse)


@dataclass(frozen=True, eq=False)
class ExactState:
    """
    A pure n-qubit state with amplitudes in Z[ω] / √2^ℓ.

    `coeffs` has shape (2^n, 4): one ExactAmplitude coefficient tuple per
    basis state. Equality and hashing compare the canonical key, so two
    states are equal exactly when they agree up to an ω-power phase.
    """

    n: int
    denom_exp: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.int64)
        if coeffs.shape != (1 << self.n, 4):
            raise DimensionError(
                f"Expected coefficient array of shape {(1 << self.n, 4)}, got {coeffs.shape}"
            )
        if self.denom_exp < 0:
            raise ValueError("Denominator exponent must be nonnegative")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_amplitudes(
        cls, amplitudes: Sequence[ExactAmplitude], denom_exp: int
    ) -> "ExactState":
        dim = len(amplitudes)
        n = dim.bit_length() - 1
        if dim < 2 or 1 << n != dim:
            raise DimensionError(f"Amplitude count {dim} is not a power of two")
        return cls(n, denom_exp, np.array([amp.coef for amp in amplitudes]))

    @classmethod
    def basis_state(cls, n: int, index: int = 0) -> "ExactState":
        if not 0 <= index < 1 << n:
            raise IndexError(f"Basis index {index} out of range for {n} qubits")
        coeffs = np.zeros((1 << n, 4), dtype=np.int64)
        coeffs[index, 0] = 1
        return cls(n, 0, coeffs)

    @classmethod
    def zero_state(cls, n: int) -> "ExactState":
        return cls.basis_state(n, 0)

    @classmethod
    def from_row(cls, n: int, row: np.ndarray) -> "ExactState":
        coeffs, exps = cyc.unpack_rows(np.asarray(row)[None, :], 1 << n)
        return cls(n, int(exps[0]), coeffs[0])

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def amps(self) -> Tuple[ExactAmplitude, ...]:
        return tuple(ExactAmplitude(*(int(v) for v in row)) for row in self.coeffs)

    def norm_squared(self) -> ExactReal:
        """Σ|amp|² as an exact (p + q√2) / 2^ℓ; equals 1 for a valid state."""
        p, q = cyc.abs2(self.coeffs)
        return ExactReal(int(p.sum()), int(q.sum()), self.denom_exp)

    def is_normalized(self) -> bool:
        p, q = cyc.abs2(self.coeffs)
        return int(q.sum()) == 0 and int(p.sum()) == 1 << self.denom_exp

    def row(self) -> np.ndarray:
        """Packed int64 row [ℓ, coeffs...] of this exact representation."""
        return cyc.pack_rows(self.coeffs[None], np.array([self.denom_exp]))[0]

    @property
    def key(self) -> bytes:
        return canonical_form(self).row().tobytes()

    def to_vector(self) -> np.ndarray:
        return cyc.to_complex(self.coeffs[None], np.array([self.denom_exp]))[0]

    def tensor(self, other: "ExactState") -> "ExactState":
        """|self⟩ ⊗ |other⟩."""
        coeffs = cyc.multiply(self.coeffs[:, None, :], other.coeffs[None, :, :])
        return ExactState(
            self.n + other.n,
            self.denom_exp + other.denom_exp,
            coeffs.reshape(-1, 4),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactState):
            return NotImplemented
        return self.n == other.n and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.n, self.key))

    def __repr__(self) -> str:
        return f"ExactState(n={self.n}, denom_exp={self.denom_exp})"

    def __str__(self) -> str:
        terms = []
        for j, amp in enumerate(self.amps):
            if not amp.is_zero():
                terms.append(f"({amp})|{j:0{self.n}b}⟩")
        return f"[{' + '.join(terms)}] / √2^{self.denom_exp}"


def _check_qubits(n: int, qubits: Sequence[int]) -> None:
    for q in qubits:
        if not 0 <= q < n:
            raise IndexError(f"Qubit index {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"Gate qubits must be distinct, got {tuple(qubits)}")


def _split_qubit(coeffs: np.ndarray, n: int, q: int) -> np.ndarray:
    """View (N, 2^n, 4) as (N, 2^q, 2, 2^{n-q-1}, 4) with axis 2 the bit of qubit q."""
    return coeffs.reshape(coeffs.shape[0], 1 << q, 2, 1 << (n - q - 1), 4)


def apply_gate_batch(
    coeffs: np.ndarray, denom_exps: np.ndarray, n: int, gate: Gate
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Apply one gate to a batch of exact states without canonicalising.

    Args:
        coeffs: Coefficients of shape (N, 2^n, 4)
        denom_exps: Exponents of shape (N,)
        n: Qubit count
        gate: Gate from CLIFFORD_GATES or T

    Returns:
        (coeffs, denom_exps) of the transformed batch
    """
    _check_qubits(n, gate.qubits)
    exps = np.asarray(denom_exps, dtype=np.int64)
    name = gate.name

    if name == "CNOT":
        control, target = gate.qubits
        j = np.arange(1 << n)
        flip = ((j >> (n - 1 - control)) & 1).astype(bool)
        source = np.where(flip, j ^ (1 << (n - 1 - target)), j)
        return coeffs[:, source], exps

    view = _split_qubit(coeffs, n, gate.qubits[0])
    zero, one = view[:, :, 0], view[:, :, 1]
    if name == "H":
        new_zero, new_one = zero + one, zero - one
        exps = exps + 1
    elif name == "S":
        new_zero, new_one = zero, cyc.mul_omega(one, 2)
    elif name == "T":
        new_zero, new_one = zero, cyc.mul_omega(one, 1)
    elif name == "X":
        new_zero, new_one = one, zero
    elif name == "Y":
        new_zero, new_one = cyc.mul_omega(one, 6), cyc.mul_omega(zero, 2)
    elif name == "Z":
        new_zero, new_one = zero, -one
    else:
        raise ValueError(f"Unknown gate: {name}")

    out = np.stack([new_zero, new_one], axis=2)
    return out.reshape(coeffs.shape), exps


def apply_word_batch(
    coeffs: np.ndarray, denom_exps: np.ndarray, n: int, word: Word
) -> Tuple[np.ndarray, np.ndarray]:
    """Apply a whole word to a batch and canonicalise the result."""
    for gate in word:
        coeffs, denom_exps = apply_gate_batch(coeffs, denom_exps, n, gate)
    return cyc.canonicalize(coeffs, denom_exps)


def apply_pauli_batch(coeffs: np.ndarray, pauli: PauliOperator) -> np.ndarray:
    """P applied to a batch (N, 2^n, 4); the denominator is unchanged."""
    targets, exponents = pauli.basis_action()
    out = np.empty_like(coeffs)
    for m in np.unique(exponents):
        sources = np.flatnonzero(exponents == m)
        out[:, targets[sources]] = cyc.mul_omega(coeffs[:, sources], int(m))
    return out


# e^{±iπ/8} R_P(±π/4) = ((1 + ω^{±1}) I + (1 - ω^{±1}) P) / 2
_ROTATION_WEIGHTS = {
    1: (np.array([1, 1, 0, 0]), np.array([1, -1, 0, 0])),
    -1: (np.array([1, 0, 0, -1]), np.array([1, 0, 0, 1])),
}


def rotate_batch(
    coeffs: np.ndarray, denom_exps: np.ndarray, pauli: PauliOperator, angle_sign: int = 1
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Apply R_P(±π/4) up to global phase to a batch and canonicalise.

    Args:
        coeffs: Coefficients of shape (N, 2^n, 4)
        denom_exps: Exponents of shape (N,)
        pauli: Rotation axis
        angle_sign: +1 or -1

    Returns:
        Canonical (coeffs, denom_exps)
    """
    if angle_sign not in _ROTATION_WEIGHTS:
        raise ValueError(f"angle_sign must be +1 or -1, got {angle_sign}")
    keep, flip = _ROTATION_WEIGHTS[angle_sign]
    rotated = cyc.multiply(coeffs, keep) + cyc.multiply(apply_pauli_batch(coeffs, pauli), flip)
    cyc.check_overflow(rotated)
    return cyc.canonicalize(rotated, np.asarray(denom_exps, dtype=np.int64) + 2)


def _single(state: ExactState) -> Tuple[np.ndarray, np.ndarray]:
    return state.coeffs[None], np.array([state.denom_exp], dtype=np.int64)


def _from_batch(n: int, coeffs: np.ndarray, exps: np.ndarray) -> ExactState:
    return ExactState(n, int(exps[0]), coeffs[0])


def canonical_form(state: ExactState) -> ExactState:
    """
    Canonical representative of the state's ω-phase class.

    The denominator exponent is minimised and the state is multiplied by the
    unit ω^m under which its first nonzero amplitude has the lexicographically
    largest coefficient tuple.
    """
    if not state.coeffs.any():
        raise ValueError("Cannot canonicalise the zero vector")
    coeffs, exps = cyc.canonicalize(*_single(state))
    return _from_batch(state.n, coeffs, exps)


def apply_clifford_generator(
    state: ExactState, gate: str, qubits: Union[int, Sequence[int]]
) -> ExactState:
    """
    Apply H, S, CNOT, X, Y or Z and return the canonical result.

    Args:
        state: Input state
        gate: Generator name
        qubits: Target qubit, or (control, target) for CNOT

    Returns:
        Canonical output state
    """
    qubits = (qubits,) if isinstance(qubits, int) else tuple(qubits)
    if gate not in CLIFFORD_GATES:
        raise ValueError(f"Not a Clifford generator: {gate}")
    return apply_gate(state, Gate(gate, qubits))


def apply_gate(state: ExactState, gate: Gate) -> ExactState:
    """Apply a Clifford generator or T and canonicalise."""
    if len(gate.qubits) != (2 if gate.name == "CNOT" else 1):
        raise ValueError(f"Wrong number of qubits for {gate.name}: {gate.qubits}")
    coeffs, exps = apply_gate_batch(*_single(state), state.n, gate)
    return _from_batch(state.n, *cyc.canonicalize(coeffs, exps))


def apply_clifford_word(state: ExactState, word: Word) -> ExactState:
    coeffs, exps = apply_word_batch(*_single(state), state.n, word)
    return _from_batch(state.n, coeffs, exps)


def apply_pauli_rotation(
    state: ExactState, pauli: PauliOperator, angle_sign: int = 1
) -> ExactState:
    """
    R_P(±π/4)|ψ⟩ = cos(π/8)|ψ⟩ ∓ i sin(π/8) P|ψ⟩, up to global phase.

    Evaluated exactly as ((1 + ω^{±1})|ψ⟩ + (1 - ω^{±1}) P|ψ⟩) / 2.
    """
    if pauli.n != state.n:
        raise DimensionError(f"Pauli on {pauli.n} qubits applied to {state.n}-qubit state")
    return _from_batch(state.n, *rotate_batch(*_single(state), pauli, angle_sign))


def apply_pauli(state: ExactState, pauli: PauliOperator) -> ExactState:
    if pauli.n != state.n:
        raise DimensionError(f"Pauli on {pauli.n} qubits applied to {state.n}-qubit state")
    return ExactState(state.n, state.denom_exp, apply_pauli_batch(state.coeffs[None], pauli)[0])


def _conjugate_bits(
    x: int, z: int, n: int, gate: Gate
) -> Tuple[int, int, int]:
    """Conjugate the Pauli (x, z) by one gate: returns (x', z', sign)."""
    sign = 1
    if gate.name == "CNOT":
        c, t = (n - 1 - q for q in gate.qubits)
        xc, zc = (x >> c) & 1, (z >> c) & 1
        xt, zt = (x >> t) & 1, (z >> t) & 1
        if xc and zt and (xt ^ zc ^ 1):
            sign = -1
        x ^= xc << t
        z ^= zt << c
        return x, z, sign

    s = n - 1 - gate.qubits[0]
    xq, zq = (x >> s) & 1, (z >> s) & 1
    if gate.name == "H":
        if xq and zq:
            sign = -1
        x = (x & ~(1 << s)) | (zq << s)
        z = (z & ~(1 << s)) | (xq << s)
    elif gate.name == "S":
        if xq and zq:
            sign = -1
        z ^= xq << s
    elif gate.name == "X":
        sign = -1 if zq else 1
    elif gate.name == "Y":
        sign = -1 if xq ^ zq else 1
    elif gate.name == "Z":
        sign = -1 if xq else 1
    else:
        raise ValueError(f"{gate.name} is not a Clifford generator")
    return x, z, sign


def conjugate_pauli_by_clifford(
    pauli: PauliOperator, word: Word
) -> Tuple[PauliOperator, int]:
    """
    Compute C P C† = sign · P' for the Clifford C given by a gate word.

    Args:
        pauli: Operator to conjugate
        word: Clifford generators in application order

    Returns:
        (P', sign) with sign ±1
    """
    x, z, sign = pauli.x_bits, pauli.z_bits, 1
    for gate in word:
        _check_qubits(pauli.n, gate.qubits)
        x, z, step = _conjugate_bits(x, z, pauli.n, gate)
        sign *= step
    return PauliOperator(pauli.n, x, z), sign


def expectations_exact_batch(
    coeffs: np.ndarray, paulis: Iterable[PauliOperator]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Numerators of ⟨ψ|P|ψ⟩ for a batch of states and several Paulis.

    The value for row i and Pauli a is (p[i, a] + q[i, a]√2) / 2^{ℓ_i}.

    Returns:
        (p, q) integer arrays of shape (N, number of Paulis)
    """
    conj = cyc.conjugate(coeffs)
    p_cols, q_cols = [], []
    for pauli in paulis:
        total = cyc.multiply(conj, apply_pauli_batch(coeffs, pauli)).sum(axis=1)
        p_cols.append(total[:, 0])
        q_cols.append(total[:, 1])
    return np.stack(p_cols, axis=1), np.stack(q_cols, axis=1)


def pauli_expectation(
    state: ExactState, pauli: PauliOperator, exact: bool = False
) -> Union[float, ExactReal]:
    """
    ⟨ψ|P|ψ⟩ for an exact state.

    Args:
        state: The state ψ
        pauli: The observable P
        exact: Return an ExactReal instead of a float

    Returns:
        Expectation value in [-1, 1]
    """
    if pauli.n != state.n:
        raise DimensionError(f"Pauli on {pauli.n} qubits measured on {state.n}-qubit state")
    p, q = expectations_exact_batch(state.coeffs[None], [pauli])
    value = ExactReal(int(p[0, 0]), int(q[0, 0]), state.denom_exp).reduced()
    return value if exact else float(value)


def float_expectations(vector: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    """
    All 4^n Pauli expectations of a (not necessarily exact) state vector.

    Args:
        vector: Complex amplitudes of length 2^n
        n: Qubit count (inferred when omitted)

    Returns:
        Real array of length 4^n in Pauli index order
    """
    vector = np.asarray(vector, dtype=np.complex128)
    if n is None:
        n = vector.shape[-1].bit_length() - 1
    if vector.shape[-1] != 1 << n:
        raise DimensionError(f"Vector of length {vector.shape[-1]} is not a {n}-qubit state")
    phases = np.exp(1j * np.pi / 4 * np.arange(8))
    conj = np.conj(vector)
    values = np.empty(4**n)
    for pauli in all_paulis(n):
        targets, exponents = pauli.basis_action()
        applied = np.empty_like(vector)
        applied[targets] = phases[exponents] * vector
        values[pauli.index] = float(np.real(np.dot(conj, applied)))
    return values
