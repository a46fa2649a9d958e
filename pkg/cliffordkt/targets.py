"""
Target states and the target-expression grammar

    expr    := factor ("*" factor)*
    factor  := name ("^" N)? | "mixed(" N ")" | "file:" path
    name    := tplus | h | sh | plus | zero | cs | ccz

Targets are described by their Pauli-expectation vectors b_a = Tr(P_a ρ);
tensor products multiply factor vectors (Kronecker order matches the Pauli
index order).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .cyclotomic import ExactAmplitude
from .errors import DimensionError, ParseError
from .pauli_algebra import ExactState, Gate, apply_gate, float_expectations

logger = logging.getLogger(__name__)

PURITY_TOL = 1e-9

# name -> qubits per copy
FACTOR_ARITY: Dict[str, int] = {
    "tplus": 1,
    "h": 1,
    "sh": 1,
    "plus": 1,
    "zero": 1,
    "cs": 2,
    "ccz": 3,
}


@dataclass(frozen=True, eq=False)
class TargetState:
    """
    A target ρ given by its 4^n Pauli expectations.

    `state` is set when ρ is a pure state with exact Z[ω] amplitudes.
    """

    n: int
    expectations: np.ndarray
    provenance: str = ""
    state: Optional[ExactState] = field(default=None, repr=False)

    def __post_init__(self):
        b = np.asarray(self.expectations, dtype=np.float64)
        if b.shape != (4**self.n,):
            raise DimensionError(f"Expected {4**self.n} expectations, got shape {b.shape}")
        if abs(b[0] - 1.0) > 1e-12:
            raise ValueError(f"Identity expectation must be 1, got {b[0]}")
        purity = float(b @ b) / 2**self.n
        if purity > 1.0 + PURITY_TOL:
            raise ValueError(f"Expectation vector has purity {purity} > 1")
        b.setflags(write=False)
        object.__setattr__(self, "expectations", b)

    @classmethod
    def from_exact(cls, state: ExactState, provenance: str = "") -> "TargetState":
        b = float_expectations(state.to_vector(), state.n)
        return cls(state.n, b, provenance, state)

    @classmethod
    def from_vector(cls, vector, provenance: str = "") -> "TargetState":
        vector = np.asarray(vector, dtype=np.complex128)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValueError("Target vector is zero")
        vector = vector / norm
        n = vector.size.bit_length() - 1
        if 1 << n != vector.size or n < 1:
            raise DimensionError(f"Vector length {vector.size} is not a power of two")
        return cls(n, float_expectations(vector, n), provenance)

    @classmethod
    def maximally_mixed(cls, n: int) -> "TargetState":
        b = np.zeros(4**n)
        b[0] = 1.0
        return cls(n, b, f"mixed({n})")

    @property
    def purity(self) -> float:
        return float(self.expectations @ self.expectations) / 2**self.n

    def tensor(self, other: "TargetState") -> "TargetState":
        state = None
        if self.state is not None and other.state is not None:
            state = self.state.tensor(other.state)
        return TargetState(
            self.n + other.n,
            np.kron(self.expectations, other.expectations),
            f"{self.provenance}*{other.provenance}",
            state,
        )

    def power(self, copies: int) -> "TargetState":
        if copies < 1:
            raise ValueError(f"Copy count must be at least 1, got {copies}")
        result = self
        for _ in range(copies - 1):
            result = result.tensor(self)
        if copies > 1:
            result = replace(result, provenance=f"{self.provenance}^{copies}")
        return result

    def mix(self, p: float, other: "TargetState") -> "TargetState":
        """The mixture p·self + (1 - p)·other."""
        if other.n != self.n:
            raise DimensionError(f"Cannot mix {self.n}- and {other.n}-qubit targets")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Mixing weight must lie in [0, 1], got {p}")
        b = p * self.expectations + (1.0 - p) * other.expectations
        return TargetState(self.n, b, f"mix({p}, {self.provenance}, {other.provenance})")

    def __repr__(self) -> str:
        return f"TargetState(n={self.n}, {self.provenance!r})"


def _one_qubit_bloch(rx: float, ry: float, rz: float) -> np.ndarray:
    theta = math.acos(max(-1.0, min(1.0, rz)))
    phi = math.atan2(ry, rx)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def _exact_factor(name: str) -> Optional[ExactState]:
    zero = ExactState.zero_state(1)
    if name == "zero":
        return zero
    if name == "plus":
        return apply_gate(zero, Gate("H", (0,)))
    if name == "tplus":
        return apply_gate(apply_gate(zero, Gate("H", (0,))), Gate("T", (0,)))
    if name == "cs":
        one = ExactAmplitude(1)
        return ExactState.from_amplitudes([one, one, one, ExactAmplitude.omega(2)], 2)
    if name == "ccz":
        one = ExactAmplitude(1)
        return ExactState.from_amplitudes([one] * 7 + [-one], 3)
    return None


def factor_state(name: str) -> TargetState:
    """Single copy of a named factor."""
    if name not in FACTOR_ARITY:
        raise ValueError(f"Unknown target factor: {name}")
    exact = _exact_factor(name)
    if exact is not None:
        return TargetState.from_exact(exact, name)
    if name == "h":
        r = 1 / math.sqrt(2)
        return TargetState.from_vector(_one_qubit_bloch(r, 0.0, r), name)
    r = 1 / math.sqrt(3)
    return TargetState.from_vector(_one_qubit_bloch(r, r, r), name)


def tplus(copies: int = 1) -> TargetState:
    return factor_state("tplus").power(copies)


def sh(copies: int = 1) -> TargetState:
    return factor_state("sh").power(copies)


@dataclass(frozen=True)
class TargetFactor:
    kind: str
    copies: int = 1
    path: Optional[str] = None
    offset: int = 0

    @property
    def arity(self) -> Optional[int]:
        if self.kind == "mixed":
            return self.copies
        if self.kind == "file":
            return None
        return FACTOR_ARITY[self.kind] * self.copies


@dataclass(frozen=True)
class TargetExpr:
    """Parsed target expression."""

    text: str
    factors: Tuple[TargetFactor, ...]

    @property
    def n(self) -> Optional[int]:
        """Total qubit count, or None while file factors are unresolved."""
        arities = [f.arity for f in self.factors]
        if any(a is None for a in arities):
            return None
        return sum(a for a in arities if a is not None)


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            found = self.peek() or "end of input"
            raise ParseError(f"Expected {literal!r}, found {found!r}", self.pos)
        self.pos += len(literal)

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.peek() or "end of input"
            raise ParseError(f"Expected a positive integer, found {found!r}", start)
        value = int(self.text[start : self.pos])
        if value < 1:
            raise ParseError("Copy counts must be at least 1", start)
        return value

    def name(self) -> str:
        start = self.pos
        while self.peek().isalpha():
            self.pos += 1
        if start == self.pos:
            found = self.peek() or "end of input"
            raise ParseError(f"Expected a target name, found {found!r}", start)
        return self.text[start : self.pos].lower()


def parse_target(text: str, max_qubits: Optional[int] = None) -> TargetExpr:
    """
    Parse a target expression such as "tplus^3", "cs*sh" or "file:rho.json".

    Args:
        text: Expression text
        max_qubits: Reject expressions with more qubits than this

    Returns:
        Parsed TargetExpr
    """
    scanner = _Scanner(text)
    factors: List[TargetFactor] = []
    while True:
        start = scanner.pos
        if text.startswith("file:", start):
            scanner.pos += len("file:")
            end = text.find("*", scanner.pos)
            end = len(text) if end < 0 else end
            path = text[scanner.pos : end].strip()
            if not path:
                raise ParseError("Empty file path", scanner.pos)
            scanner.pos = end
            factors.append(TargetFactor("file", 1, path, start))
        else:
            name = scanner.name()
            if name == "mixed":
                if scanner.peek() != "(":
                    raise ParseError("mixed needs a qubit count, as in mixed(2)", scanner.pos)
                scanner.expect("(")
                copies = scanner.integer()
                scanner.expect(")")
                factors.append(TargetFactor("mixed", copies, None, start))
            elif name in FACTOR_ARITY:
                copies = 1
                if scanner.peek() == "^":
                    scanner.pos += 1
                    copies = scanner.integer()
                factors.append(TargetFactor(name, copies, None, start))
            else:
                raise ParseError(f"Unknown target {name!r}", start)
        if scanner.pos == len(text):
            break
        scanner.expect("*")

    expr = TargetExpr(text, tuple(factors))
    if max_qubits is not None and expr.n is not None and expr.n > max_qubits:
        raise DimensionError(
            f"Target {text!r} has {expr.n} qubits, more than the maximum {max_qubits}"
        )
    return expr


def load_target_file(path: Union[str, Path]) -> TargetState:
    """
    Read a JSON target: {"amplitudes": [[re, im], ...]} or {"expectations": [...]}.
    """
    path = Path(path)
    with open(path, "r") as f:
        data = json.load(f)
    if "amplitudes" in data:
        amplitudes = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return TargetState.from_vector(amplitudes, f"file:{path}")
    if "expectations" in data:
        b = np.asarray(data["expectations"], dtype=np.float64)
        n = (b.size.bit_length() - 1) // 2
        if 4**n != b.size or n < 1:
            raise DimensionError(f"{b.size} expectations is not 4^n for any n ≥ 1")
        return TargetState(n, b, f"file:{path}")
    raise ValueError(f"{path} has neither 'amplitudes' nor 'expectations'")


def build_target(expr: Union[str, TargetExpr], max_qubits: Optional[int] = None) -> TargetState:
    """
    Assemble the expectation vector of a target expression.

    Args:
        expr: Expression text or parsed TargetExpr
        max_qubits: Reject targets with more qubits than this

    Returns:
        TargetState with provenance set to the expression text
    """
    if isinstance(expr, str):
        expr = parse_target(expr, max_qubits)

    result: Optional[TargetState] = None
    for factor in expr.factors:
        if factor.kind == "file":
            assert factor.path is not None
            part = load_target_file(factor.path)
        elif factor.kind == "mixed":
            part = TargetState.maximally_mixed(factor.copies)
        else:
            part = factor_state(factor.kind).power(factor.copies)
        result = part if result is None else result.tensor(part)
        if max_qubits is not None and result.n > max_qubits:
            raise DimensionError(
                f"Target {expr.text!r} exceeds the maximum of {max_qubits} qubits"
            )

    assert result is not None
    result = replace(result, provenance=expr.text)
    logger.debug(f"Built target {expr.text!r} on {result.n} qubits")
    return result
