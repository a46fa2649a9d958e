"""
Utility functions for formatting, sizes and CSV output
"""

import csv
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

_SIZE_UNITS = {
    "": 1,
    "B": 1,
    "K": 1024,
    "KB": 1024,
    "KIB": 1024,
    "M": 1024**2,
    "MB": 1024**2,
    "MIB": 1024**2,
    "G": 1024**3,
    "GB": 1024**3,
    "GIB": 1024**3,
    "T": 1024**4,
    "TB": 1024**4,
    "TIB": 1024**4,
}


def parse_byte_size(text: Union[str, int]) -> int:
    """
    Parse a human-readable byte size.

    Args:
        text: Size such as "8G", "512MiB" or "1048576"

    Returns:
        Size in bytes
    """
    if isinstance(text, int):
        return text

    match = re.fullmatch(r"\s*([0-9]+(?:\.[0-9]+)?)\s*([A-Za-z]*)\s*", text)
    if match is None or match.group(2).upper() not in _SIZE_UNITS:
        raise ValueError(f"Invalid byte size: {text!r}")
    return int(float(match.group(1)) * _SIZE_UNITS[match.group(2).upper()])


def format_byte_size(size_bytes: float) -> str:
    """
    Format a byte count in human-readable form.

    Args:
        size_bytes: Size in bytes

    Returns:
        Formatted size string
    """
    for unit in ["B", "KB", "MB", "GB"]:
        if size_bytes < 1024.0:
            return f"{size_bytes:.1f} {unit}"
        size_bytes /= 1024.0
    return f"{size_bytes:.1f} TB"


def format_value(value: float, digits: int = 7) -> str:
    """Render a robustness value the way the published tables do."""
    return f"{value:.{digits}f}"


def write_csv(
    path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """
    Write rows to a CSV file, creating parent directories.

    Args:
        path: Output file path
        header: Column names
        rows: Row values

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def grid_rows(
    grid: Mapping[Tuple[int, int], Any], n_values: Sequence[int], k_values: Sequence[int]
) -> List[List[Any]]:
    """
    Lay out an (n, k) -> value mapping as table rows, blank where missing.

    Args:
        grid: Values keyed by (n, k)
        n_values: Row labels
        k_values: Column labels

    Returns:
        One row per n, first cell is n
    """
    return [[n] + [grid.get((n, k), "") for k in k_values] for n in n_values]


def render_table(
    title: str, grid: Dict[Tuple[int, int], Any], formatter=str
) -> str:
    """Render an (n, k) grid as plain text in the layout of the published tables."""
    if not grid:
        return f"{title}\n(empty)"
    n_values = sorted({n for n, _ in grid})
    k_values = sorted({k for _, k in grid})
    cells = [["k"] + [str(k) for k in k_values]]
    for n in n_values:
        cells.append(
            [f"n={n}"]
            + [formatter(grid[(n, k)]) if (n, k) in grid else "" for k in k_values]
        )
    widths = [max(len(row[i]) for row in cells) for i in range(len(cells[0]))]
    lines = [title]
    for i, row in enumerate(cells):
        lines.append(" | ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        if i == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines)
