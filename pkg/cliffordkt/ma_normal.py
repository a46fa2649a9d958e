"""
Matsumoto–Amano normal form for single-qubit {H, S, T} words

A word is read as an operator product: "HT" means H·T, so T acts first.
Every Clifford+T unitary has a unique normal form
(ε | T)(HT | SHT)* C, written here as a tuple of syllables and the index of
the trailing Clifford C among the 24 one-qubit Cliffords.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import cyclotomic as cyc
from .errors import ParseError

logger = logging.getLogger(__name__)

ALPHABET = "HST"
SYLLABLES = ("T", "HT", "SHT")

_GATE_MATRICES = {
    "H": (np.array([[[1, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0], [-1, 0, 0, 0]]]), 1),
    "S": (np.array([[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 1, 0]]]), 0),
    "T": (np.array([[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 1, 0, 0]]]), 0),
}


@dataclass(frozen=True)
class GateWord:
    """A word over {H, S, T}; the empty word is the identity."""

    letters: str = ""

    def __post_init__(self):
        for offset, letter in enumerate(self.letters):
            if letter not in ALPHABET:
                raise ParseError(f"Invalid gate {letter!r} in word {self.letters!r}", offset)

    @classmethod
    def parse(cls, text: str) -> "GateWord":
        """Parse text such as "H T S" or "HTS"; whitespace is ignored."""
        letters = []
        for offset, ch in enumerate(text):
            if ch.isspace():
                continue
            if ch.upper() not in ALPHABET:
                raise ParseError(f"Invalid gate {ch!r}", offset)
            letters.append(ch.upper())
        return cls("".join(letters))

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "GateWord":
        return cls("".join(rng.choice(list(ALPHABET), size=length)))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "GateWord") -> "GateWord":
        return GateWord(self.letters + other.letters)

    def __str__(self) -> str:
        return " ".join(self.letters)

    def inverse(self) -> "GateWord":
        """Word of U† up to global phase: S† = S³, T† = T⁷, H† = H."""
        replace = {"H": "H", "S": "SSS", "T": "TTTTTTT"}
        return GateWord("".join(replace[g] for g in reversed(self.letters)))

    def t_count(self) -> int:
        """Number of T letters (an upper bound on the T-count)."""
        return self.letters.count("T")

    def matrix(self) -> Tuple[np.ndarray, int]:
        return word_matrix(self.letters)


def matmul(
    a: np.ndarray, a_exp: np.ndarray, b: np.ndarray, b_exp: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Batched exact 2×2 product; matrices are (..., 2, 2, 4) over 1/√2^ℓ."""
    product = cyc.multiply(a[..., :, :, None, :], b[..., None, :, :, :]).sum(axis=-3)
    return product, np.asarray(a_exp) + np.asarray(b_exp)


def word_matrix(letters: str) -> Tuple[np.ndarray, int]:
    """Exact matrix of an operator-order word, reduced to the lowest denominator."""
    matrix = np.array([[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [1, 0, 0, 0]]], dtype=np.int64)
    exp = 0
    for letter in letters:
        gate, gate_exp = _GATE_MATRICES[letter]
        matrix, exp = matmul(matrix, exp, gate, gate_exp)
        exp = int(exp)
        matrix, exps = cyc.reduce_denominator(matrix.reshape(1, 4, 4), np.array([exp]))
        matrix, exp = matrix.reshape(2, 2, 4), int(exps[0])
    return matrix, exp


def matrix_keys(matrices: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Canonical key rows of a batch of 2×2 matrices up to ω-phase."""
    flat = matrices.reshape(len(matrices), 4, 4)
    coeffs, reduced = cyc.canonicalize(flat, exps)
    return cyc.pack_rows(coeffs, reduced)


def _fingerprint(matrix: np.ndarray, exp: int) -> bytes:
    """Canonical images of |0⟩ and |+⟩; faithful on the Clifford group."""
    col0 = matrix[:, 0]
    plus = matrix[:, 0] + matrix[:, 1]
    images = np.stack([col0, plus])
    coeffs, exps = cyc.canonicalize(images, np.array([exp, exp + 1]))
    return cyc.pack_rows(coeffs, exps).tobytes()


class CliffordTable:
    """
    The 24 one-qubit Cliffords up to phase, with multiplication tables.

    Index 0 is the identity; the rest follow breadth-first order over the
    generators H and S, and `words[i]` is a shortest H/S word for index i.
    """

    def __init__(self) -> None:
        words = [""]
        matrices = [word_matrix("")]
        lookup = {_fingerprint(*matrices[0]): 0}
        i = 0
        while i < len(words):
            for g in "HS":
                matrix, exp = word_matrix(words[i] + g)
                key = _fingerprint(matrix, exp)
                if key not in lookup:
                    lookup[key] = len(words)
                    words.append(words[i] + g)
                    matrices.append((matrix, exp))
            i += 1
        if len(words) != 24:
            raise RuntimeError(f"Clifford closure produced {len(words)} elements")

        self.words: List[str] = words
        self.matrices = matrices
        self._lookup: Dict[bytes, int] = lookup
        self.compose_table = np.array(
            [[self.index_of(*matmul(*matrices[a], *matrices[b])) for b in range(24)] for a in range(24)]
        )
        self.gate_index = {g: self.index_of(*word_matrix(g)) for g in "HS"}
        self.identity = 0
        self._split()

    def index_of(self, matrix: np.ndarray, exp) -> int:
        """Index of a Clifford matrix; raises KeyError for non-Cliffords."""
        flat, exps = cyc.reduce_denominator(matrix.reshape(1, 4, 4), np.array([int(exp)]))
        return self._lookup[_fingerprint(flat.reshape(2, 2, 4), int(exps[0]))]

    def compose(self, a: int, b: int) -> int:
        """Index of C_a · C_b."""
        return int(self.compose_table[a, b])

    def word_index(self, letters: str) -> int:
        index = self.identity
        for g in letters:
            index = self.compose(index, self.gate_index[g])
        return index

    def _split(self) -> None:
        """
        Factor every C as E·D with E ∈ {I, H, SH} and D diagonal or
        anti-diagonal, and record D' with D·T = T·D'.
        """
        t_matrix = word_matrix("T")
        t_dagger = word_matrix("TTTTTTT")
        left = {"": "", "H": "H", "SH": "HSSS"}
        self.split: List[Tuple[str, int]] = []
        self.past_t: Dict[int, int] = {}
        for c in range(24):
            for prefix, inverse in left.items():
                d = self.compose(self.word_index(inverse), c)
                matrix, _ = self.matrices[d]
                if (matrix[0, 1] == 0).all() and (matrix[1, 0] == 0).all() or (
                    (matrix[0, 0] == 0).all() and (matrix[1, 1] == 0).all()
                ):
                    self.split.append((prefix, d))
                    if d not in self.past_t:
                        shifted = matmul(*matmul(*t_dagger, *self.matrices[d]), *t_matrix)
                        self.past_t[d] = self.index_of(*shifted)
                    break
            else:
                raise RuntimeError(f"Clifford {c} has no coset decomposition")


@lru_cache(maxsize=1)
def clifford_table() -> CliffordTable:
    return CliffordTable()


@dataclass(frozen=True)
class NormalForm:
    """Syllables from {T, HT, SHT} (only the first may be T) and a Clifford index."""

    syllables: Tuple[str, ...]
    clifford: int

    def __post_init__(self):
        if not 0 <= self.clifford < 24:
            raise IndexError(f"Clifford index {self.clifford} out of range")
        for i, syllable in enumerate(self.syllables):
            allowed = SYLLABLES if i == 0 else SYLLABLES[1:]
            if syllable not in allowed:
                raise ValueError(f"Syllable {syllable!r} not allowed at position {i}")

    @property
    def t_count(self) -> int:
        return len(self.syllables)

    @property
    def clifford_word(self) -> str:
        return clifford_table().words[self.clifford]

    @property
    def word(self) -> GateWord:
        return GateWord("".join(self.syllables) + self.clifford_word)

    def to_dict(self):
        return {
            "syllables": list(self.syllables),
            "clifford_index": self.clifford,
            "clifford_word": self.clifford_word,
            "t_count": self.t_count,
        }

    def __str__(self) -> str:
        parts = list(self.syllables) + [f"C{self.clifford}"]
        return " ".join(parts)


def to_normal_form(word) -> NormalForm:
    """
    Rewrite a word into its Matsumoto–Amano normal form.

    The word is consumed left to right, keeping U = syllables · C. Appending
    a Clifford updates C; appending T factors C = E·D, moves D past T, and
    either opens a new syllable E·T or merges T into the last syllable.

    Args:
        word: GateWord or text over {H, S, T}

    Returns:
        The unique NormalForm of the word's unitary
    """
    if not isinstance(word, GateWord):
        word = GateWord.parse(str(word))
    table = clifford_table()
    syllables: List[str] = []
    tail = table.identity

    for letter in word.letters:
        if letter != "T":
            tail = table.compose(tail, table.gate_index[letter])
            continue
        prefix, diagonal = table.split[tail]
        shifted = table.past_t[diagonal]
        if prefix:
            syllables.append(prefix + "T")
            tail = shifted
        elif syllables:
            # X·T·T·D' = X·S·D'
            last = syllables.pop()
            tail = table.compose(table.word_index(last[:-1] + "S"), shifted)
        else:
            syllables.append("T")
            tail = shifted
    return NormalForm(tuple(syllables), tail)


def strict_gate_count(k: int) -> int:
    """Number of strict Clifford+kT one-qubit gates: 3·2^{k-1}·24, and 24 for k = 0."""
    if k < 0:
        raise ValueError(f"T-count must be nonnegative, got {k}")
    if k == 0:
        return 24
    return 3 * 2 ** (k - 1) * 24


def strict_normal_forms(k: int) -> Iterator[NormalForm]:
    """Every normal form with T-count k."""
    heads = SYLLABLES if k else ()
    bodies: List[Tuple[str, ...]] = [()]
    for _ in range(max(k - 1, 0)):
        bodies = [body + (s,) for body in bodies for s in SYLLABLES[1:]]
    sequences = [(head,) + body for head in heads for body in bodies] if k else [()]
    for seq in sequences:
        for c in range(24):
            yield NormalForm(seq, c)


class TCountOracle:
    """
    Exact T-counts by breadth-first search over matrices up to phase.

    Level k holds C·T·U for every Clifford C and level-(k-1) matrix U, minus
    everything found at lower levels.
    """

    def __init__(self, max_k: int = 8) -> None:
        table = clifford_table()
        cliffords = np.stack([m for m, _ in table.matrices])
        clifford_exps = np.array([e for _, e in table.matrices])
        t_matrix, _ = word_matrix("T")

        self.max_k = max_k
        self.levels: Dict[bytes, int] = {}
        self.level_sizes: List[int] = []

        level = cliffords
        level_exps = clifford_exps
        seen = matrix_keys(level, level_exps)
        self._record(seen, 0)
        for k in range(1, max_k + 1):
            t_level, t_exps = matmul(t_matrix[None], np.zeros(1, dtype=np.int64), level, level_exps)
            cand = cyc.multiply(
                cliffords[:, None, :, :, None, :], t_level[None, :, None, :, :, :]
            ).sum(axis=-3)
            cand = cand.reshape(-1, 2, 2, 4)
            cand_exps = (clifford_exps[:, None] + t_exps[None, :]).reshape(-1)
            cand, cand_exps = cyc.reduce_denominator(cand.reshape(-1, 4, 4), cand_exps)
            keys = cyc.unique_rows(matrix_keys(cand.reshape(-1, 2, 2, 4), cand_exps))
            fresh = cyc.rows_difference(keys, seen)
            seen = cyc.unique_rows(np.concatenate([seen, fresh]))
            self._record(fresh, k)
            level, level_exps = cyc.unpack_rows(fresh, 4)
            level = level.reshape(-1, 2, 2, 4)
            logger.debug(f"T-count level {k}: {len(fresh)} gates")

    def _record(self, keys: np.ndarray, k: int) -> None:
        self.level_sizes.append(len(keys))
        for row in keys:
            self.levels[row.tobytes()] = k

    def t_count(self, word) -> Optional[int]:
        """Minimal T-count of the word, or None when it exceeds max_k."""
        if not isinstance(word, GateWord):
            word = GateWord.parse(str(word))
        matrix, exp = word.matrix()
        key = matrix_keys(matrix[None], np.array([exp]))[0]
        return self.levels.get(key.tobytes())


def proposition_report(k: int) -> Dict[str, int]:
    """
    Check the gate-level propositions on every strict one-qubit gate of T-count k.

    Counts violations of: inverse keeps the T-count, appending or prepending
    H or S keeps it, appending or prepending T changes it by exactly one, and
    re-normalising a normal form's word returns it unchanged.

    Returns:
        Mapping of check name to number of failures, plus "gates"
    """
    failures = {"inverse": 0, "clifford": 0, "t_step": 0, "idempotent": 0}
    gates = 0
    for nf in strict_normal_forms(k):
        gates += 1
        word = nf.word
        if to_normal_form(word) != nf:
            failures["idempotent"] += 1
        if to_normal_form(word.inverse()).t_count != k:
            failures["inverse"] += 1
        for g in ("H", "S"):
            if to_normal_form(GateWord(g) + word).t_count != k:
                failures["clifford"] += 1
            if to_normal_form(word + GateWord(g)).t_count != k:
                failures["clifford"] += 1
        for shifted in (GateWord("T") + word, word + GateWord("T")):
            if abs(to_normal_form(shifted).t_count - k) != 1:
                failures["t_step"] += 1
    failures["gates"] = gates
    return failures


def random_words(count: int, max_length: int, seed: int = 0) -> List[GateWord]:
    rng = np.random.default_rng(seed)
    lengths = rng.integers(0, max_length + 1, size=count)
    return [GateWord.random(int(length), rng) for length in lengths]


def oracle_agreement(words: Sequence[GateWord], oracle: TCountOracle) -> int:
    """Number of words whose normal-form T-count disagrees with the oracle."""
    mismatches = 0
    for word in words:
        expected = oracle.t_count(word)
        got = to_normal_form(word).t_count
        if (got != expected) if expected is not None else (got <= oracle.max_k):
            mismatches += 1
    return mismatches
