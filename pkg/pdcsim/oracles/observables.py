from enum import Enum


class Observable(str, Enum):
    """Quantities the brute-force oracles can evaluate."""
    J_SQUARED = "j_squared"
    TOTAL_N = "total_n"
    B_CORRELATOR = "b_correlator"
    RATIO = "ratio"
