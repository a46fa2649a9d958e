"""
Exact arithmetic over the ring Z[ω], ω = e^{iπ/4}

A ring element is four integers (a, b, c, d) meaning a + bω + cω² + dω³.
Vectorised kernels below take integer arrays whose last axis holds these
four coefficients; state-like arrays are shaped (N, L, 4) with a per-row
exponent ℓ of the shared 1/√2^ℓ denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

OMEGA = complex(math.sqrt(0.5), math.sqrt(0.5))
OMEGA_BASIS = np.exp(1j * np.pi / 4 * np.arange(4))
SQRT2 = math.sqrt(2.0)

# int64 products of two coefficients must not wrap
COEFF_LIMIT = 2**30


class ExactAmplitude:
    """An element a + bω + cω² + dω³ of Z[ω] with arbitrary-precision coefficients."""

    __slots__ = ("_a", "_b", "_c", "_d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> None:
        self._a = int(a)
        self._b = int(b)
        self._c = int(c)
        self._d = int(d)

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    @property
    def c(self) -> int:
        return self._c

    @property
    def d(self) -> int:
        return self._d

    @property
    def coef(self) -> Tuple[int, int, int, int]:
        return (self._a, self._b, self._c, self._d)

    @classmethod
    def from_int(cls, x: int) -> "ExactAmplitude":
        return cls(x, 0, 0, 0)

    @classmethod
    def omega(cls, m: int = 1) -> "ExactAmplitude":
        """The unit ω^m."""
        return cls(1).mul_omega(m)

    def __repr__(self) -> str:
        return f"ExactAmplitude({self._a}, {self._b}, {self._c}, {self._d})"

    def __str__(self) -> str:
        return f"{self._a}{self._b:+}ω{self._c:+}ω²{self._d:+}ω³"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.coef == (other, 0, 0, 0)
        if isinstance(other, ExactAmplitude):
            return self.coef == other.coef
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coef)

    def __add__(self, other: Union[int, "ExactAmplitude"]) -> "ExactAmplitude":
        if isinstance(other, int):
            other = ExactAmplitude.from_int(other)
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        return ExactAmplitude(*(x + y for x, y in zip(self.coef, other.coef)))

    def __radd__(self, other: int) -> "ExactAmplitude":
        return self + other

    def __neg__(self) -> "ExactAmplitude":
        return ExactAmplitude(-self._a, -self._b, -self._c, -self._d)

    def __sub__(self, other: Union[int, "ExactAmplitude"]) -> "ExactAmplitude":
        return self + (-other)

    def __rsub__(self, other: int) -> "ExactAmplitude":
        return (-self) + other

    def __mul__(self, other: Union[int, "ExactAmplitude"]) -> "ExactAmplitude":
        if isinstance(other, int):
            return ExactAmplitude(*(x * other for x in self.coef))
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        new_coef = [0] * 4
        for i, x in enumerate(self.coef):
            for j, y in enumerate(other.coef):
                if i + j < 4:
                    new_coef[i + j] += x * y
                else:
                    new_coef[i + j - 4] -= x * y
        return ExactAmplitude(*new_coef)

    def __rmul__(self, other: int) -> "ExactAmplitude":
        return self * other

    def conj(self) -> "ExactAmplitude":
        """Complex conjugate; ω ↦ ω⁷ = -ω³."""
        return ExactAmplitude(self._a, -self._d, -self._c, -self._b)

    def mul_omega(self, m: int = 1) -> "ExactAmplitude":
        """Multiply by ω^m: each step rotates the coefficients and negates the wrapped one."""
        a, b, c, d = self.coef
        for _ in range(m % 8):
            a, b, c, d = -d, a, b, c
        return ExactAmplitude(a, b, c, d)

    def units(self) -> List["ExactAmplitude"]:
        """The eight multiples ω^m · self, m = 0..7."""
        return [self.mul_omega(m) for m in range(8)]

    def is_zero(self) -> bool:
        return self.coef == (0, 0, 0, 0)

    def divisible_by_sqrt2(self) -> bool:
        return (self._a - self._c) % 2 == 0 and (self._b - self._d) % 2 == 0

    def mul_sqrt2(self) -> "ExactAmplitude":
        a, b, c, d = self.coef
        return ExactAmplitude(b - d, a + c, b + d, c - a)

    def div_sqrt2(self) -> "ExactAmplitude":
        if not self.divisible_by_sqrt2():
            raise ValueError(f"{self} is not divisible by √2")
        a, b, c, d = self.coef
        return ExactAmplitude((b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2)

    def abs2(self) -> "ExactReal":
        """|z|² as an exact element p + q√2 of Z[√2]."""
        a, b, c, d = self.coef
        return ExactReal(a * a + b * b + c * c + d * d, a * b + b * c + c * d - d * a)

    def to_complex(self, denom_exp: int = 0) -> complex:
        value = sum(x * OMEGA**i for i, x in enumerate(self.coef))
        return complex(value) / SQRT2**denom_exp


@dataclass(frozen=True)
class ExactReal:
    """A real number (p + q√2) / 2^ℓ with integer p, q."""

    p: int
    q: int
    denom_exp: int = 0

    def reduced(self) -> "ExactReal":
        p, q, exp = self.p, self.q, self.denom_exp
        while exp > 0 and p % 2 == 0 and q % 2 == 0:
            p, q, exp = p // 2, q // 2, exp - 1
        return ExactReal(p, q, exp)

    def __float__(self) -> float:
        return (self.p + self.q * SQRT2) / 2.0**self.denom_exp

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ExactReal(other, 0, 0)
        if not isinstance(other, ExactReal):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return (a.p, a.q, a.denom_exp) == (b.p, b.q, b.denom_exp)

    def __hash__(self) -> int:
        r = self.reduced()
        return hash((r.p, r.q, r.denom_exp))

    def __str__(self) -> str:
        return f"({self.p}{self.q:+}√2)/2^{self.denom_exp}"


def mul_omega(arr: np.ndarray, m: int) -> np.ndarray:
    """Multiply every element of a coefficient array by ω^m."""
    m %= 8
    shift = m % 4
    out = np.roll(arr, shift, axis=-1)
    if shift:
        out[..., :shift] = -out[..., :shift]
    if m >= 4:
        out = -out
    return out


def multiply(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Elementwise product in Z[ω] (negacyclic convolution since ω⁴ = -1)."""
    u = np.asarray(u)
    v = np.asarray(v)
    out = np.zeros(np.broadcast(u, v).shape, dtype=np.result_type(u, v))
    for i in range(4):
        for j in range(4):
            term = u[..., i] * v[..., j]
            if i + j < 4:
                out[..., i + j] += term
            else:
                out[..., i + j - 4] -= term
    return out


def conjugate(u: np.ndarray) -> np.ndarray:
    return np.stack([u[..., 0], -u[..., 3], -u[..., 2], -u[..., 1]], axis=-1)


def sqrt2_divisible(u: np.ndarray) -> np.ndarray:
    return (((u[..., 0] - u[..., 2]) & 1) == 0) & (((u[..., 1] - u[..., 3]) & 1) == 0)


def div_sqrt2(u: np.ndarray) -> np.ndarray:
    a, b, c, d = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
    return np.stack([(b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2], axis=-1)


def abs2(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """|z|² = p + q√2 for every element."""
    a, b, c, d = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
    return a * a + b * b + c * c + d * d, a * b + b * c + c * d - d * a


def check_overflow(coeffs: np.ndarray) -> None:
    if coeffs.size and int(np.abs(coeffs).max()) > COEFF_LIMIT:
        raise OverflowError("Z[ω] coefficients exceed the 64-bit working range")


def reduce_denominator(
    coeffs: np.ndarray, denom_exps: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bring each row (N, L, 4) to its smallest √2-denominator exponent.

    Args:
        coeffs: Coefficient array of shape (N, L, 4)
        denom_exps: Exponents ℓ of shape (N,)

    Returns:
        Reduced (coeffs, denom_exps); the input arrays are not modified
    """
    coeffs = np.array(coeffs, dtype=np.int64, copy=True)
    exps = np.array(denom_exps, dtype=np.int64, copy=True)
    while True:
        rows = sqrt2_divisible(coeffs).all(axis=1) & (exps > 0)
        if not rows.any():
            return coeffs, exps
        coeffs[rows] = div_sqrt2(coeffs[rows])
        exps[rows] -= 1


def lexmax_index(candidates: np.ndarray) -> np.ndarray:
    """
    Index of the lexicographically largest row along axis 1.

    Args:
        candidates: Integer array of shape (N, K, M)

    Returns:
        Array of shape (N,); ties resolve to the smallest index
    """
    alive = np.ones(candidates.shape[:2], dtype=bool)
    floor = np.iinfo(candidates.dtype).min
    for col in range(candidates.shape[2]):
        values = candidates[:, :, col]
        best = np.where(alive, values, floor).max(axis=1)
        alive &= values == best[:, None]
    return alive.argmax(axis=1)


def lexmin_index(candidates: np.ndarray) -> np.ndarray:
    """Index of the lexicographically smallest row along axis 1."""
    return lexmax_index(-candidates)


def canonical_phase(coeffs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Multiply each row by the unit ω^m that makes its first nonzero entry
    lexicographically maximal among its eight unit multiples.

    Args:
        coeffs: Coefficient array of shape (N, L, 4)

    Returns:
        (rotated coeffs, chosen m per row)
    """
    n_rows = coeffs.shape[0]
    nonzero = (coeffs != 0).any(axis=-1)
    first = nonzero.argmax(axis=1)
    lead = coeffs[np.arange(n_rows), first]
    candidates = np.stack([mul_omega(lead, m) for m in range(8)], axis=1)
    best = lexmax_index(candidates)

    out = np.array(coeffs, copy=True)
    for m in range(1, 8):
        rows = best == m
        if rows.any():
            out[rows] = mul_omega(coeffs[rows], m)
    return out, best


def canonicalize(
    coeffs: np.ndarray, denom_exps: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Reduce denominators, then fix the ω-phase; idempotent."""
    coeffs, exps = reduce_denominator(coeffs, denom_exps)
    coeffs, _ = canonical_phase(coeffs)
    return coeffs, exps


def pack_rows(coeffs: np.ndarray, denom_exps: np.ndarray) -> np.ndarray:
    """Flatten (N, L, 4) coefficients and ℓ into int64 key rows [ℓ, coeffs...]."""
    n_rows = coeffs.shape[0]
    return np.concatenate(
        [np.asarray(denom_exps, dtype=np.int64)[:, None], coeffs.reshape(n_rows, -1)],
        axis=1,
    ).astype(np.int64, copy=False)


def unpack_rows(rows: np.ndarray, length: int) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of pack_rows for rows describing `length` amplitudes."""
    rows = np.asarray(rows, dtype=np.int64)
    return rows[:, 1:].reshape(rows.shape[0], length, 4), rows[:, 0]


def to_complex(coeffs: np.ndarray, denom_exps: np.ndarray) -> np.ndarray:
    """Collapse exact rows (N, L, 4) to complex128 values (N, L)."""
    values = coeffs.astype(np.float64) @ OMEGA_BASIS
    scale = np.power(2.0, -np.asarray(denom_exps, dtype=np.float64) / 2.0)
    return values * scale[:, None]


def unique_rows(rows: np.ndarray) -> np.ndarray:
    """Sorted distinct rows (lexicographic numeric order)."""
    if len(rows) == 0:
        return rows.reshape(0, rows.shape[1] if rows.ndim == 2 else 0)
    return np.unique(rows, axis=0)


def rows_difference(rows: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Distinct rows of `rows` that do not occur in `other` (both duplicate-free)."""
    if len(other) == 0:
        return unique_rows(rows)
    if len(rows) == 0:
        return rows
    stacked = np.concatenate([rows, other, other])
    uniq, counts = np.unique(stacked, axis=0, return_counts=True)
    return uniq[counts == 1]


def locate_rows(reference: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """
    Position of every query row inside `reference`.

    Args:
        reference: Duplicate-free rows of shape (R, M)
        queries: Rows of shape (Q, M)

    Returns:
        int64 array of shape (Q,); -1 where a query row is absent
    """
    if len(queries) == 0:
        return np.zeros(0, dtype=np.int64)
    stacked = np.concatenate([reference, queries])
    _, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    slot = np.full(int(inverse.max()) + 1, -1, dtype=np.int64)
    slot[inverse[: len(reference)]] = np.arange(len(reference), dtype=np.int64)
    return slot[inverse[len(reference):]]
