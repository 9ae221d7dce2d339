"""Truncated four-mode Fock-space simulator for the lossless pure state (n0 = 0).

The basis holds every occupation tuple (n_ah, n_av, n_bh, n_bv) with total photon
number <= 2 n_max. The vacuum is evolved by exp(r (X - X^dagger)) with the pair
creator X = a_h^dag b_v^dag - a_v^dag b_h^dag, and observables are read off as
explicit matrix elements of sparse ladder operators.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

from pdcsim.criteria.correlators import CorrelatorSpec
from pdcsim.errors import CapacityError, DomainError, UndefinedRatioError
from pdcsim.gaussian.modes import NUM_MODES, ModeIndex, OperatorFactor, adjoint_string
from pdcsim.oracles.observables import Observable

logger = logging.getLogger(__name__)

MAX_FOCK_DIMENSION = 300_000
ACCEPTED_TRUNCATION = 1e-8


class FockConfig(BaseModel):
    """Truncation n_max (in photon pairs) and interaction parameter r."""
    model_config = ConfigDict(frozen=True)

    n_max: int = Field(ge=1)
    r: float = Field(ge=0.0)

    @property
    def truncation_error(self) -> float:
        """Weight tanh^(2 n_max)(r) of the first dropped pair-number shell."""
        return math.tanh(self.r) ** (2 * self.n_max)

    @property
    def dimension(self) -> int:
        return math.comb(2 * self.n_max + NUM_MODES, NUM_MODES)

    @classmethod
    def for_radius(cls, r: float, tolerance: float = 1e-12) -> "FockConfig":
        """Smallest n_max whose truncation estimate is below tolerance."""
        if r == 0.0:
            return cls(n_max=1, r=r)
        n_max = math.ceil(math.log(tolerance) / (2.0 * math.log(math.tanh(r))))
        return cls(n_max=max(1, n_max), r=r)


@dataclass(frozen=True)
class FockResult:
    value: float
    truncation_error: float
    dimension: int


class FockBasis:
    """Occupation tuples with total <= max_photons, in lexicographic order."""

    def __init__(self, max_photons: int):
        self.max_photons = max_photons
        self.radix = max_photons + 1
        top = max_photons
        self.states = np.array([
            (ah, av, bh, bv)
            for ah in range(top + 1)
            for av in range(top + 1 - ah)
            for bh in range(top + 1 - ah - av)
            for bv in range(top + 1 - ah - av - bh)
        ], dtype=np.int64)
        self.keys = self._encode(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def _encode(self, states: np.ndarray) -> np.ndarray:
        keys = np.zeros(len(states), dtype=np.int64)
        for mode in range(NUM_MODES):
            keys = keys * self.radix + states[:, mode]
        return keys

    def index_of(self, states: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.keys, self._encode(np.atleast_2d(states)))

    def annihilator(self, mode: ModeIndex) -> sparse.csr_matrix:
        """Sparse a_mode; its transpose is the truncated creator."""
        occupied = np.nonzero(self.states[:, mode] > 0)[0]
        lowered = self.states[occupied].copy()
        lowered[:, mode] -= 1
        amplitudes = np.sqrt(self.states[occupied, mode].astype(float))
        size = len(self)
        return sparse.csr_matrix((amplitudes, (self.index_of(lowered), occupied)), shape=(size, size))


@lru_cache(maxsize=4)
def _ladder_operators(max_photons: int) -> Tuple[FockBasis, List[sparse.csr_matrix]]:
    basis = FockBasis(max_photons)
    return basis, [basis.annihilator(mode) for mode in ModeIndex]


@lru_cache(maxsize=4)
def _evolved_state(config: FockConfig) -> np.ndarray:
    if config.dimension > MAX_FOCK_DIMENSION:
        raise CapacityError(
            f"Fock basis of dimension {config.dimension} exceeds the cap of {MAX_FOCK_DIMENSION}")
    basis, ops = _ladder_operators(2 * config.n_max)
    logger.debug("🔬 Fock basis: %d states (n_max=%d)", len(basis), config.n_max)

    pair_creator = (ops[ModeIndex.AH].T @ ops[ModeIndex.BV].T
                    - ops[ModeIndex.AV].T @ ops[ModeIndex.BH].T)
    generator = (config.r * (pair_creator - pair_creator.T)).tocsc()

    vacuum = np.zeros(len(basis))
    vacuum[0] = 1.0
    return expm_multiply(generator, vacuum)


def _apply(ops: List[sparse.csr_matrix], factors: Sequence[OperatorFactor], vector: np.ndarray) -> np.ndarray:
    """Apply the ordered product to a vector, rightmost factor first."""
    for factor in reversed(factors):
        op = ops[factor.mode]
        vector = (op.T if factor.dagger else op) @ vector
    return vector


def _stokes_operators(ops: List[sparse.csr_matrix]) -> List[sparse.csr_matrix]:
    """Total Stokes components J_x, J_y, J_z from h/v bilinears of each arm."""
    components = [None, None, None]
    for h, v in ((ModeIndex.AH, ModeIndex.AV), (ModeIndex.BH, ModeIndex.BV)):
        a_h, a_v = ops[h], ops[v]
        cross = a_h.T @ a_v
        arm = [
            0.5 * (cross + cross.T),
            0.5j * (cross - cross.T),
            0.5 * (a_h.T @ a_h - a_v.T @ a_v),
        ]
        components = [arm[i] if components[i] is None else components[i] + arm[i] for i in range(3)]
    return components


def _total_number(ops: List[sparse.csr_matrix], psi: np.ndarray) -> float:
    return float(sum(np.vdot(op @ psi, op @ psi).real for op in ops))


def fock_expectation(config: FockConfig, observable: Observable,
                     spec: Optional[CorrelatorSpec] = None) -> FockResult:
    """Expectation of an observable in the truncated pure state at parameter r."""
    observable = Observable(observable)
    psi = _evolved_state(config)
    _, ops = _ladder_operators(2 * config.n_max)
    if config.truncation_error > ACCEPTED_TRUNCATION:
        logger.warning("⚠️  Fock truncation estimate %.3g exceeds %.0e; raise n_max",
                       config.truncation_error, ACCEPTED_TRUNCATION)

    if observable == Observable.TOTAL_N:
        value = _total_number(ops, psi)
    elif observable == Observable.J_SQUARED:
        value = sum(float(np.vdot(j @ psi, j @ psi).real) for j in _stokes_operators(ops))
    elif observable == Observable.B_CORRELATOR:
        if spec is None:
            raise DomainError("the B correlator needs a CorrelatorSpec")
        lowered = _apply(ops, spec.annihilators(), psi)
        value = float(np.vdot(lowered, lowered).real)
    else:
        total = _total_number(ops, psi)
        if total == 0.0:
            raise UndefinedRatioError("<J^2>/<N> is undefined for the vacuum")
        j2 = sum(float(np.vdot(j @ psi, j @ psi).real) for j in _stokes_operators(ops))
        value = j2 / total

    return FockResult(value=value, truncation_error=config.truncation_error, dimension=len(psi))


def fock_moment(config: FockConfig, factors: Sequence[OperatorFactor]) -> complex:
    """<psi| f_1 ... f_k |psi> as the overlap of the leading creators' adjoint with the rest.

    Exact within the truncation for normally ordered strings.
    """
    psi = _evolved_state(config)
    _, ops = _ladder_operators(2 * config.n_max)
    factors = list(factors)
    split = 0
    while split < len(factors) and factors[split].dagger:
        split += 1
    left = _apply(ops, adjoint_string(factors[:split]), psi)
    right = _apply(ops, factors[split:], psi)
    return complex(np.vdot(left, right))
