"""Explicit-solution oracle for the cavity dynamics.

For the pair (a_h, b_v) the Green's function of the Langevin system is
exp(-lambda (t - t')) [[cosh D, sinh D], [sinh D, cosh D]] with D = Delta(t, t').
In the combinations u = m + A and w = m - A, where m = n + c'/2, the kernels
diagonalize into exp(+-2D), so

    u(t) = nu e^{-2 lambda t} e^{2 Delta(t,0)} + 2 lambda nu int_0^t e^{-2 lambda (t-t')} e^{2 Delta(t,t')} dt'

and w likewise with e^{-2 Delta}; nu = n0 + c'/2. The (a_v, b_h) pair follows
with the opposite sign of A.
"""
import logging
import math
import warnings

import numpy as np
from scipy import integrate

from pdcsim.dynamics.lossy import delta_kernel
from pdcsim.dynamics.params import LossyParams
from pdcsim.errors import AccuracyError, DomainError
from pdcsim.gaussian.moments import GaussianMoments
from pdcsim.gaussian.modes import NUM_MODES, ModeIndex

logger = logging.getLogger(__name__)

QUAD_ABS_TOL = 1e-9
QUAD_REL_TOL = 1e-10
QUAD_LIMIT = 200


def _noise_integral(params: LossyParams, t: float, sign: float) -> float:
    """2 lambda int_0^t exp(-2 lambda (t - t') + 2 sign Delta(t, t')) dt'."""
    rate = params.loss_rate

    def integrand(t_prime: float) -> float:
        return math.exp(-2.0 * rate * (t - t_prime) + 2.0 * sign * delta_kernel(params, t, t_prime))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, error = integrate.quad(
            integrand, 0.0, t, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL,
            limit=QUAD_LIMIT, full_output=1)[:2]
    if error > max(QUAD_ABS_TOL, QUAD_REL_TOL * abs(value)) * 10.0:
        raise AccuracyError(
            f"noise quadrature did not converge at t={t}: estimate {value:.6g} +- {error:.3g}")
    return 2.0 * rate * value


def quadrature_moments(params: LossyParams, t: float) -> GaussianMoments:
    """Moments at time t evaluated from the explicit Langevin solution."""
    if t < 0 or t > params.t_max * (1.0 + 1e-12):
        raise DomainError(f"t must lie on [0, {params.t_max}], got {t}")

    c = params.stat.commutator
    nu = params.n0 + 0.5 * c
    delta = delta_kernel(params, t, 0.0)
    damping = math.exp(-2.0 * params.loss_rate * t)

    growing = nu * damping * math.exp(2.0 * delta)
    decaying = nu * damping * math.exp(-2.0 * delta)
    # lambda = 0: no bath, homogeneous part only
    if params.loss_rate > 0.0 and t > 0.0:
        growing += nu * _noise_integral(params, t, +1.0)
        decaying += nu * _noise_integral(params, t, -1.0)

    occupation = 0.5 * (growing + decaying) - 0.5 * c
    pair = 0.5 * (growing - decaying)
    logger.debug("Quadrature moments at t=%.4g: n=%.8g, A=%.8g", t, occupation, pair)

    normal = occupation * np.eye(NUM_MODES)
    anomalous = np.zeros((NUM_MODES, NUM_MODES))
    anomalous[ModeIndex.AH, ModeIndex.BV] = anomalous[ModeIndex.BV, ModeIndex.AH] = pair
    anomalous[ModeIndex.AV, ModeIndex.BH] = anomalous[ModeIndex.BH, ModeIndex.AV] = -pair
    return GaussianMoments(normal=normal, anomalous=anomalous, stat=params.stat)
