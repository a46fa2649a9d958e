"""
Published reference values used by the verification suites and the CLI tables

Count grids and robustness grids are keyed by (n, k).
"""

import math
from typing import Dict, Tuple

from .errors import MissingTableEntryError

Grid = Dict[Tuple[int, int], float]

CUMULATIVE_COUNTS: Dict[Tuple[int, int], int] = {
    **{(1, k): v for k, v in enumerate([6, 18, 42, 90, 186, 378, 762, 1530, 3066, 6138, 12282])},
    **{(2, k): v for k, v in enumerate([60, 420, 2580, 18900, 134100, 1040340])},
    **{(3, k): v for k, v in enumerate([1080, 16200, 227880, 4098600])},
    **{(4, k): v for k, v in enumerate([36720, 1138320])},
}

STRICT_COUNTS: Dict[Tuple[int, int], int] = {
    **{(1, k): v for k, v in enumerate([6, 12, 24, 48, 96, 192, 384, 768, 1536, 3072, 6144])},
    **{(2, k): v for k, v in enumerate([60, 360, 2160, 16320, 115200, 906240])},
    **{(3, k): v for k, v in enumerate([1080, 15120, 211680, 3870720])},
    **{(4, k): v for k, v in enumerate([36720, 1101600])},
}

# Layers beyond these are slow enough to stay out of routine runs.
GATING_LEVELS = {1: 10, 2: 4, 3: 2, 4: 1}

TPLUS_ROBUSTNESS: Grid = {
    (1, 0): 1.4142136, (1, 1): 1.0, (1, 2): 1.0, (1, 3): 1.0,
    (2, 0): 1.7475469, (2, 1): 1.3431458, (2, 2): 1.0, (2, 3): 1.0,
    (3, 0): 2.2189514, (3, 1): 1.7451660, (3, 2): 1.3431458, (3, 3): 1.0,
    (4, 0): 2.8627417, (4, 1): 2.2161620, (4, 2): 1.7451660,
}

SH_ROBUSTNESS: Grid = {
    (1, 0): 1.7320508, (1, 1): 1.2247449, (1, 2): 1.0146119, (1, 3): 1.0146119,
    (2, 0): 2.2320508, (2, 1): 1.7941234, (2, 2): 1.4245404, (2, 3): 1.1458531,
    (3, 0): 3.0980762, (3, 1): 2.5403969, (3, 2): 2.0741375,
    (4, 0): 4.3310015,
}

# Single-qubit |SH⟩ beyond k = 3: flat through k = 6, then a drop.
SH_PLATEAU_LEVELS = (2, 3, 4, 5, 6)
SH_R7 = 1.0020233

CS_ROBUSTNESS: Grid = {(1, 0): 2.2, (1, 1): 1.7451660, (1, 2): 1.3431458, (1, 3): 1.0}
CCZ_ROBUSTNESS: Grid = {(1, 0): 2.5555555, (1, 1): 2.2161620, (1, 2): 1.7451660, (1, 3): 1.3431458, (1, 4): 1.0}

# R_k(T|+⟩^⊗n) = R_{k-1}(T|+⟩^⊗(n-1)) at these ((n, k), (n - 1, k - 1)) cells
TPLUS_SATURATION = (((3, 2), (2, 1)), ((4, 2), (3, 1)))

# [R_1(|SH⟩)]^k [R_0(|SH⟩^⊗n)]^{1-k/n}
SH_PER_T_COSTS: Grid = {
    (1, 0): 1.732, (1, 1): 1.225, (1, 2): 0.866, (1, 3): 0.612,
    (2, 0): 2.232, (2, 1): 1.830, (2, 2): 1.500, (2, 3): 1.230,
    (3, 0): 3.098, (3, 1): 2.603, (3, 2): 2.187,
    (4, 0): 4.331,
}

# Cells of the per-T grid that exceed the optimal blocked robustness.
SH_BLOCKED_WINS = ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2))

TPLUS3_K3_REPRESENTATIVES = 95074

# Closed forms of table values, as (text, exact value); only (p + q√r)/s shapes
SYMBOLIC_FORMS: Dict[float, Tuple[str, float]] = {
    1.4142136: ("√2", math.sqrt(2.0)),
    1.7475469: ("(1 + 3√2)/3", (1.0 + 3.0 * math.sqrt(2.0)) / 3.0),
    1.3431458: ("7 - 4√2", 7.0 - 4.0 * math.sqrt(2.0)),
    2.2189514: ("(1 + 4√2)/3", (1.0 + 4.0 * math.sqrt(2.0)) / 3.0),
    1.7451660: ("47 - 32√2", 47.0 - 32.0 * math.sqrt(2.0)),
    2.8627417: ("(3 + 8√2)/5", (3.0 + 8.0 * math.sqrt(2.0)) / 5.0),
    2.2161620: ("319 - 224√2", 319.0 - 224.0 * math.sqrt(2.0)),
    1.7320508: ("√3", math.sqrt(3.0)),
    2.2320508: ("(1 + 2√3)/2", (1.0 + 2.0 * math.sqrt(3.0)) / 2.0),
    3.0980762: ("(1 + 3√3)/2", (1.0 + 3.0 * math.sqrt(3.0)) / 2.0),
    4.3310015: ("(13 + 20√3)/11", (13.0 + 20.0 * math.sqrt(3.0)) / 11.0),
}

ROBUSTNESS_TABLES: Dict[str, Grid] = {
    "tplus": TPLUS_ROBUSTNESS,
    "sh": SH_ROBUSTNESS,
    "cs": CS_ROBUSTNESS,
    "ccz": CCZ_ROBUSTNESS,
}


def lookup(grid: Grid, n: int, k: int) -> float:
    """Entry (n, k) of a grid; MissingTableEntryError when it is absent."""
    try:
        return grid[(n, k)]
    except KeyError:
        raise MissingTableEntryError(f"No table entry for n={n}, k={k}") from None


def expected_value(grid: Grid, n: int, k: int) -> Tuple[float, float]:
    """Best known value of a grid entry and the tolerance it is good to."""
    value = lookup(grid, n, k)
    if value in SYMBOLIC_FORMS:
        return SYMBOLIC_FORMS[value][1], 1e-7
    return value, 1e-6
