"""Monte Carlo oracle for the classical stochastic model.

Initial amplitudes are thermal circular Gaussians with <|a|^2> = n0 (the classical
occupation). Lossless runs push them through a -> cosh(r) a + sinh(r) G a*; lossy
runs integrate da = (-lambda a + kappa(t) G a*) dt + sqrt(2 lambda n0) dW with
Euler-Maruyama steps, <|dW|^2> = dt.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from pdcsim.criteria.correlators import CorrelatorSpec
from pdcsim.dynamics.lossless import pair_coupling
from pdcsim.dynamics.lossy import coupling
from pdcsim.dynamics.params import LossyParams, SteadyParams
from pdcsim.errors import DomainError, UndefinedRatioError
from pdcsim.gaussian.modes import NUM_MODES, ModeIndex, StatKind
from pdcsim.oracles.observables import Observable
from pdcsim.oracles.rng import SampleStream, block_streams

logger = logging.getLogger(__name__)

U64_MAX = 2 ** 64 - 1


class McConfig(BaseModel):
    """Sample count, seed and classical scenario of a Monte Carlo run."""
    model_config = ConfigDict(frozen=True)

    samples: int = Field(ge=1)
    seed: int = Field(ge=0, le=U64_MAX)
    params: Union[SteadyParams, LossyParams]
    block_size: int = Field(default=10_000, ge=1)
    t: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def check_classical(self) -> "McConfig":
        if self.params.stat != StatKind.CLASSICAL:
            raise ValueError("the Monte Carlo oracle samples classical statistics only")
        if self.t is not None and isinstance(self.params, LossyParams) and self.t > self.params.t_max:
            raise ValueError(f"t ({self.t}) must not exceed t_max ({self.params.t_max})")
        return self

    @property
    def n_blocks(self) -> int:
        return -(-self.samples // self.block_size)

    def block_sizes(self) -> List[int]:
        sizes = [self.block_size] * self.n_blocks
        sizes[-1] = self.samples - self.block_size * (self.n_blocks - 1)
        return sizes


@dataclass(frozen=True)
class McEstimate:
    mean: float
    standard_error: float
    samples: int


def propagate_lossless(amplitudes: np.ndarray, r: float) -> np.ndarray:
    return np.cosh(r) * amplitudes + np.sinh(r) * (amplitudes.conj() @ pair_coupling())


def propagate_lossy(stream: SampleStream, amplitudes: np.ndarray, params: LossyParams, t_end: float) -> np.ndarray:
    """Euler-Maruyama integration of the classical Langevin equations up to t_end."""
    n_steps = max(1, int(round(t_end / params.dt))) if t_end > 0 else 0
    if n_steps == 0:
        return amplitudes
    step = t_end / n_steps
    gain = pair_coupling()
    noise_scale = np.sqrt(2.0 * params.loss_rate * params.n0) * np.sqrt(0.5 * step)

    a = amplitudes.copy()
    for i in range(n_steps):
        drift = -params.loss_rate * a + coupling(params, i * step) * (a.conj() @ gain)
        a = a + step * drift
        if noise_scale > 0.0:
            a = a + noise_scale * stream.complex_gaussian(a.shape)
    return a


def stokes_squared(amplitudes: np.ndarray) -> np.ndarray:
    """Per-sample J^2 = sum_u (J_u^A + J_u^B)^2 of classical amplitudes."""
    components = np.zeros((3, amplitudes.shape[0]))
    for h, v in ((ModeIndex.AH, ModeIndex.AV), (ModeIndex.BH, ModeIndex.BV)):
        cross = amplitudes[:, h].conj() * amplitudes[:, v]
        components[0] += cross.real
        components[1] += -cross.imag
        components[2] += 0.5 * (np.abs(amplitudes[:, h]) ** 2 - np.abs(amplitudes[:, v]) ** 2)
    return (components ** 2).sum(axis=0)


def _sample_block(config: McConfig, stream: SampleStream, size: int) -> np.ndarray:
    params = config.params
    amplitudes = stream.thermal_amplitudes(size, params.n0, NUM_MODES)
    if isinstance(params, SteadyParams):
        return propagate_lossless(amplitudes, params.r)
    t_end = params.t_max if config.t is None else config.t
    return propagate_lossy(stream, amplitudes, params, t_end)


def sample_amplitudes(config: McConfig, workers: int = 1) -> np.ndarray:
    """All final amplitudes, blocks concatenated in block order."""
    streams = block_streams(config.seed, config.n_blocks)
    sizes = config.block_sizes()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        blocks = list(pool.map(lambda job: _sample_block(config, *job), zip(streams, sizes)))
    return np.concatenate(blocks)


def _mean_estimate(values: np.ndarray) -> McEstimate:
    n = len(values)
    error = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else float("inf")
    return McEstimate(mean=float(values.mean()), standard_error=error, samples=n)


def _ratio_estimate(numerator: np.ndarray, denominator: np.ndarray) -> McEstimate:
    """Ratio of means with the delta-method standard error."""
    n = len(numerator)
    mean_den = float(denominator.mean())
    if mean_den == 0.0:
        raise UndefinedRatioError("sampled <N> vanishes")
    ratio = float(numerator.mean()) / mean_den
    if n < 2:
        return McEstimate(mean=ratio, standard_error=float("inf"), samples=n)
    cov = np.cov(numerator, denominator, ddof=1)
    variance = (cov[0, 0] - 2.0 * ratio * cov[0, 1] + ratio ** 2 * cov[1, 1]) / (mean_den ** 2 * n)
    return McEstimate(mean=ratio, standard_error=float(np.sqrt(max(variance, 0.0))), samples=n)


def mc_estimate(config: McConfig, observable: Observable, spec: Optional[CorrelatorSpec] = None,
                workers: int = 1) -> McEstimate:
    """Sample mean and standard error of a classical observable."""
    observable = Observable(observable)
    logger.info("🎲 Monte Carlo: %d samples of %s (seed %d)", config.samples, observable.value, config.seed)
    amplitudes = sample_amplitudes(config, workers)
    total = (np.abs(amplitudes) ** 2).sum(axis=1)

    if observable == Observable.TOTAL_N:
        return _mean_estimate(total)
    if observable == Observable.J_SQUARED:
        return _mean_estimate(stokes_squared(amplitudes))
    if observable == Observable.B_CORRELATOR:
        if spec is None:
            raise DomainError("the B correlator needs a CorrelatorSpec")
        product = np.ones(len(amplitudes), dtype=complex)
        for mode, power in spec.exponents():
            product = product * amplitudes[:, mode] ** power
        return _mean_estimate(np.abs(product) ** 2)
    return _ratio_estimate(stokes_squared(amplitudes), total)
