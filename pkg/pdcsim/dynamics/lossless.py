import math

import numpy as np

from pdcsim.dynamics.params import SteadyParams
from pdcsim.gaussian.moments import GaussianMoments, thermal_state
from pdcsim.gaussian.modes import NUM_MODES, ModeIndex, StatKind

CLASSICAL_VACUUM_OFFSET = 0.5


def pair_coupling() -> np.ndarray:
    """Symmetric coupling G of the pair generator a_h^dag b_v^dag - a_v^dag b_h^dag.

    The Heisenberg motion is a -> cosh(r) a + sinh(r) G a^dagger.
    """
    coupling = np.zeros((NUM_MODES, NUM_MODES))
    coupling[ModeIndex.AH, ModeIndex.BV] = coupling[ModeIndex.BV, ModeIndex.AH] = 1.0
    coupling[ModeIndex.AV, ModeIndex.BH] = coupling[ModeIndex.BH, ModeIndex.AV] = -1.0
    return coupling


def bogoliubov_matrix(r: float) -> np.ndarray:
    """8x8 map S with (a, a^dagger)(r) = S (a, a^dagger)(0)."""
    identity = np.eye(NUM_MODES)
    coupling = pair_coupling()
    return np.block([
        [math.cosh(r) * identity, math.sinh(r) * coupling],
        [math.sinh(r) * coupling, math.cosh(r) * identity],
    ])


def evolve_lossless(params: SteadyParams) -> GaussianMoments:
    """Conjugate the thermal input by the Bogoliubov map: Gamma(r) = S Gamma(0) S^T."""
    initial = thermal_state(params.n0, params.stat)
    transform = bogoliubov_matrix(params.r)
    pair = transform @ initial.pair_matrix() @ transform.T
    return GaussianMoments.from_pair_matrix(pair, params.stat)


def classical_counterpart(params: SteadyParams) -> SteadyParams:
    """Classical model with n0c = n0 + 1/2, which absorbs the vacuum fluctuations."""
    return SteadyParams(r=params.r, n0=params.n0 + CLASSICAL_VACUUM_OFFSET, stat=StatKind.CLASSICAL)


def intensity(r: float, n0: float, stat: StatKind = StatKind.QUANTUM) -> float:
    """Closed-form single-mode intensity n(r) (quantum) or n^C(r) (classical)."""
    amplification = 1.0 + 2.0 * math.sinh(r) ** 2
    if stat == StatKind.QUANTUM:
        return math.sinh(r) ** 2 + n0 * amplification
    return n0 * amplification


def anomalous_amplitude(r: float, n0: float, stat: StatKind = StatKind.QUANTUM) -> float:
    """Closed-form magnitude of <a_h b_v>: (n0 + 1/2) sinh 2r quantum, n0 sinh 2r classical."""
    offset = 0.5 if stat == StatKind.QUANTUM else 0.0
    return (n0 + offset) * math.sinh(2.0 * r)


def intensity_ratio(r: float, n0: float) -> float:
    """n(r) / n^C(r) with the classical input n0 + 1/2; tends to 1 for large r."""
    return intensity(r, n0) / intensity(r, n0 + CLASSICAL_VACUUM_OFFSET, StatKind.CLASSICAL)
