"""Cavity dynamics: linear Langevin equations integrated at the second-moment level.

With xi = (a, a^dagger) the Langevin system reads d xi/dt = K(t) xi + noise, where
K(t) = [[-lambda I, kappa(t) G], [kappa(t) G, -lambda I]]. The ordered pair
matrix Gamma = <xi xi^T> then obeys the exact linear ODE

    dGamma/dt = K Gamma + Gamma K^T + D,

with D = 2 lambda [[0, (n0 + c) I], [n0 I, 0]] (bath occupation n0, commutator
weight c). Integrated with classic fixed-step RK4.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from pdcsim.dynamics.lossless import pair_coupling
from pdcsim.dynamics.params import LossyParams
from pdcsim.errors import AccuracyError, DomainError
from pdcsim.gaussian.moments import GaussianMoments, thermal_state
from pdcsim.gaussian.modes import NUM_MODES

logger = logging.getLogger(__name__)

STEP_HALVING_TOLERANCE = 1e-6


def coupling(params: LossyParams, t: float) -> float:
    """kappa(t) = kappa0 * exp(-Lambda t)."""
    return params.kappa0 * math.exp(-params.decay_rate * t)


def delta_kernel(params: LossyParams, t: float, t_prime: float) -> float:
    """Accumulated coupling Delta(t, t') = integral of kappa over [t', t]."""
    if t_prime > t:
        raise DomainError(f"delta_kernel needs t' <= t, got t'={t_prime}, t={t}")
    if t_prime < 0:
        raise DomainError(f"delta_kernel needs t' >= 0, got {t_prime}")
    if params.decay_rate == 0.0:
        return params.kappa0 * (t - t_prime)
    decay = params.decay_rate
    return (params.kappa0 / decay) * math.exp(-decay * t_prime) * -math.expm1(-decay * (t - t_prime))


def drift_matrix(params: LossyParams, t: float) -> np.ndarray:
    identity = np.eye(NUM_MODES)
    gain = coupling(params, t) * pair_coupling()
    return np.block([
        [-params.loss_rate * identity, gain],
        [gain, -params.loss_rate * identity],
    ])


def diffusion_matrix(params: LossyParams) -> np.ndarray:
    """Bath contribution, normalized so that kappa = 0 relaxes to the thermal state at n0."""
    identity = np.eye(NUM_MODES)
    zero = np.zeros((NUM_MODES, NUM_MODES))
    c = params.stat.commutator
    return 2.0 * params.loss_rate * np.block([
        [zero, (params.n0 + c) * identity],
        [params.n0 * identity, zero],
    ])


def rk4(t1: float, x1: np.ndarray, f: Callable, h: float, args: Tuple = ()) -> np.ndarray:
    """Returns the classic RK4 increment."""
    k1 = h * f(t1, x1, *args)
    k2 = h * f(t1 + 0.5 * h, x1 + 0.5 * k1, *args)
    k3 = h * f(t1 + 0.5 * h, x1 + 0.5 * k2, *args)
    k4 = h * f(t1 + h, x1 + k3, *args)
    return (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _moment_rhs(t: float, pair: np.ndarray, params: LossyParams, diffusion: np.ndarray) -> np.ndarray:
    drift = drift_matrix(params, t)
    return drift @ pair + pair @ drift.T + diffusion


def integrate_pair_matrix(params: LossyParams, n_steps: int) -> Tuple[np.ndarray, np.ndarray]:
    """Integrate Gamma over [0, t_max] with n_steps equal steps; returns (times, Gamma[t])."""
    times = np.linspace(0.0, params.t_max, n_steps + 1)
    step = params.t_max / n_steps
    diffusion = diffusion_matrix(params)

    pairs = np.empty((n_steps + 1, 2 * NUM_MODES, 2 * NUM_MODES), dtype=complex)
    pairs[0] = thermal_state(params.n0, params.stat).pair_matrix()
    for i in range(n_steps):
        pairs[i + 1] = pairs[i] + rk4(times[i], pairs[i], _moment_rhs, step, (params, diffusion))
    return times, pairs


@dataclass(frozen=True)
class MomentTrajectory:
    """Moments on the integration grid of a lossy run."""
    params: LossyParams
    times: np.ndarray
    states: List[GaussianMoments]

    def __len__(self) -> int:
        return len(self.states)

    def delta_eff(self) -> np.ndarray:
        """Effective interaction parameter Delta(t, 0) on the grid."""
        return np.array([delta_kernel(self.params, float(t), 0.0) for t in self.times])


def step_halving_error(coarse: np.ndarray, fine: np.ndarray) -> float:
    """Largest relative change at the coarse grid points when the step is halved."""
    worst = 0.0
    for a, b in zip(coarse, fine[::2]):
        scale = max(1.0, float(np.linalg.norm(b)))
        worst = max(worst, float(np.linalg.norm(a - b)) / scale)
    return worst


def evolve_lossy(params: LossyParams, self_test: bool = True) -> MomentTrajectory:
    """Moments at every grid point of [0, t_max] for the cavity scenario."""
    n_steps = params.n_steps
    logger.info("⏱️  Integrating moment ODEs: %d RK4 steps of %.4g (%s)",
                n_steps, params.t_max / n_steps, params.stat.value)
    times, pairs = integrate_pair_matrix(params, n_steps)

    if self_test:
        _, fine = integrate_pair_matrix(params, 2 * n_steps)
        error = step_halving_error(pairs, fine)
        logger.debug("Step-halving change: %.3g", error)
        if error >= STEP_HALVING_TOLERANCE:
            raise AccuracyError(
                f"halving dt changed the moments by {error:.3g} (relative); "
                f"use a smaller dt than {params.dt}")

    states = [GaussianMoments.from_pair_matrix(pair, params.stat) for pair in pairs]
    return MomentTrajectory(params=params, times=times, states=states)
