"""
CKTS state-set files

Layout (little-endian):
    header  magic b"CKTS", version u32, n u32, k u32, kind u32 (0 cumulative,
            1 strict), count u64
    records count × (denom_exp u32, 2^n × 4 coefficients i64)
"""

import logging
import struct
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from . import cyclotomic as cyc
from .enumeration import CUMULATIVE, STRICT, StateSet, row_width
from .errors import FormatError

logger = logging.getLogger(__name__)

MAGIC = b"CKTS"
VERSION = 1
HEADER = struct.Struct("<4sIIIIQ")
_KIND_FLAGS = {CUMULATIVE: 0, STRICT: 1}


def _record_dtype(n: int) -> np.dtype:
    return np.dtype([("denom_exp", "<u4"), ("coeffs", "<i8", (4 * (1 << n),))])


def layer_path(directory: Union[str, Path], n: int, k: int, kind: str = CUMULATIVE) -> Path:
    """Conventional file name for one layer inside a data directory."""
    return Path(directory) / f"n{n}_k{k}_{kind}.ckts"


def write_state_set(state_set: StateSet, path: Union[str, Path]) -> Path:
    """
    Persist a StateSet.

    Args:
        state_set: Set to write
        path: Output file

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = state_set.rows
    if len(rows) and (rows[:, 0].min() < 0 or rows[:, 0].max() >= 2**32):
        raise FormatError("Denominator exponent does not fit the u32 record field")

    records = np.zeros(len(rows), dtype=_record_dtype(state_set.n))
    records["denom_exp"] = rows[:, 0]
    records["coeffs"] = rows[:, 1:]

    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as f:
        f.write(
            HEADER.pack(
                MAGIC,
                VERSION,
                state_set.n,
                state_set.k,
                _KIND_FLAGS[state_set.kind],
                len(rows),
            )
        )
        f.write(records.tobytes())
    tmp.replace(path)
    logger.info(f"Wrote {len(rows)} states to {path}")
    return path


def read_header(path: Union[str, Path]) -> Dict[str, object]:
    path = Path(path)
    with open(path, "rb") as f:
        raw = f.read(HEADER.size)
    if len(raw) != HEADER.size:
        raise FormatError(f"{path} is too short to hold a CKTS header")
    magic, version, n, k, kind_flag, count = HEADER.unpack(raw)
    if magic != MAGIC:
        raise FormatError(f"{path} is not a CKTS file (magic {magic!r})")
    if version != VERSION:
        raise FormatError(f"Unsupported CKTS version {version} in {path}")
    kinds = {v: name for name, v in _KIND_FLAGS.items()}
    if kind_flag not in kinds:
        raise FormatError(f"Unknown kind flag {kind_flag} in {path}")
    return {"n": n, "k": k, "kind": kinds[kind_flag], "count": count}


def read_state_set(path: Union[str, Path]) -> StateSet:
    """
    Load a StateSet written by write_state_set.

    Args:
        path: CKTS file

    Returns:
        The stored StateSet with its ids unchanged
    """
    path = Path(path)
    header = read_header(path)
    n, count = int(header["n"]), int(header["count"])
    dtype = _record_dtype(n)

    payload = path.read_bytes()[HEADER.size :]
    if len(payload) != count * dtype.itemsize:
        raise FormatError(
            f"{path} holds {len(payload)} record bytes, expected {count * dtype.itemsize}"
        )
    records = np.frombuffer(payload, dtype=dtype)
    rows = np.empty((count, row_width(n)), dtype=np.int64)
    rows[:, 0] = records["denom_exp"]
    rows[:, 1:] = records["coeffs"]

    if not rows_are_sorted(rows):
        raise FormatError(f"{path} records are not sorted distinct states")
    logger.debug(f"Read {count} states from {path}")
    return StateSet(n, int(header["k"]), str(header["kind"]), rows)


def completed_layers(directory: Union[str, Path], n: int) -> List[StateSet]:
    """
    Consecutive cumulative layers k = 0, 1, ... already stored in a directory.

    Used to resume an interrupted enumeration.
    """
    layers = []
    k = 0
    while True:
        path = layer_path(directory, n, k)
        if not path.exists():
            return layers
        try:
            layer = read_state_set(path)
        except FormatError as e:
            logger.warning(f"Ignoring unreadable layer {path}: {e}")
            return layers
        if layer.n != n or layer.k != k or layer.kind != CUMULATIVE:
            logger.warning(f"Ignoring mismatched layer {path}")
            return layers
        layers.append(layer)
        k += 1


def rows_are_sorted(rows: np.ndarray) -> bool:
    """True when rows are in the canonical sorted order used for ids."""
    return bool(len(rows) < 2 or np.array_equal(cyc.unique_rows(rows), rows))
