"""n-particle correlators <B^(n)dag_alpha B^(n')_alpha'> and their quantum/classical ratio.

B^(n)_{m,l,k} = (b_v)^(n-m) (b_h)^(m-l) (a_v)^(l-k) (a_h)^k.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pdcsim.dynamics.lossless import classical_counterpart, evolve_lossless
from pdcsim.dynamics.params import SteadyParams
from pdcsim.errors import CapacityError, UndefinedRatioError
from pdcsim.gaussian.moments import GaussianMoments
from pdcsim.gaussian.modes import ModeIndex, OperatorFactor, StatKind, adjoint_string
from pdcsim.gaussian.wick import DEFAULT_MAX_FACTORS, wick_moment

logger = logging.getLogger(__name__)

IMAGINARY_TOLERANCE = 1e-9


class CorrelatorSpec(BaseModel):
    """Indices (n, m, l, k) selecting one n-particle destruction operator."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    m: int = Field(ge=0)
    l: int = Field(ge=0)
    k: int = Field(ge=0)

    @model_validator(mode="after")
    def check_ordering(self) -> "CorrelatorSpec":
        if not (0 <= self.k <= self.l <= self.m <= self.n):
            raise ValueError(f"need 0 <= k <= l <= m <= n, got n={self.n}, m={self.m}, l={self.l}, k={self.k}")
        return self

    @property
    def alpha(self) -> Tuple[int, int, int]:
        return (self.k, self.l, self.m)

    def exponents(self) -> List[Tuple[ModeIndex, int]]:
        """Powers of b_v, b_h, a_v, a_h in operator order; they sum to n."""
        return [
            (ModeIndex.BV, self.n - self.m),
            (ModeIndex.BH, self.m - self.l),
            (ModeIndex.AV, self.l - self.k),
            (ModeIndex.AH, self.k),
        ]

    def annihilators(self) -> List[OperatorFactor]:
        """B as an ordered list of destruction factors."""
        return [OperatorFactor(mode, False) for mode, power in self.exponents() for _ in range(power)]

    def charges(self) -> Tuple[int, int]:
        """Imbalance of (N_Ah - N_Bv, N_Av - N_Bh) removed by B."""
        powers = dict(self.exponents())
        return (powers[ModeIndex.AH] - powers[ModeIndex.BV],
                powers[ModeIndex.AV] - powers[ModeIndex.BH])

    def __str__(self) -> str:
        return f"B({self.n};m={self.m},l={self.l},k={self.k})"


def default_spec(order: int) -> CorrelatorSpec:
    """B = b_v^(n//2) a_h^(n - n//2): the pair-balanced member of each order."""
    singles = order - order // 2
    return CorrelatorSpec(n=order, m=singles, l=singles, k=singles)


def all_specs(order: int) -> List[CorrelatorSpec]:
    return [CorrelatorSpec(n=order, m=m, l=l, k=k)
            for m in range(order + 1) for l in range(m + 1) for k in range(l + 1)]


def correlator_string(left: CorrelatorSpec, right: CorrelatorSpec) -> List[OperatorFactor]:
    """Ordered factors of B_left^dagger B_right."""
    return adjoint_string(left.annihilators()) + right.annihilators()


def _check_capacity(factors: Sequence[OperatorFactor]):
    if len(factors) > DEFAULT_MAX_FACTORS:
        raise CapacityError(f"correlator needs {len(factors)} factors, cap is {DEFAULT_MAX_FACTORS}")


def cross_correlator(moments: GaussianMoments, left: CorrelatorSpec, right: CorrelatorSpec) -> complex:
    """<B_left^dagger B_right> for any pair of specs."""
    factors = correlator_string(left, right)
    _check_capacity(factors)
    return wick_moment(moments, factors)


def b_correlator(moments: GaussianMoments, spec: CorrelatorSpec) -> float:
    """<B^dagger B>, a norm-squared expectation and therefore real and non-negative."""
    value = cross_correlator(moments, spec, spec)
    if abs(value.imag) > IMAGINARY_TOLERANCE * max(1.0, abs(value)):
        logger.warning("⚠️  %s has imaginary part %.3g", spec, value.imag)
    return float(value.real)


def correlator_allowed(left: CorrelatorSpec, right: CorrelatorSpec) -> bool:
    """Whether the conserved pair charges and zero mean permit a non-zero cross correlator."""
    if (left.n + right.n) % 2:
        return False
    return left.charges() == right.charges()


@dataclass(frozen=True)
class QCRatioPoint:
    r: float
    quantum: float
    classical: float
    ratio: float


@dataclass(frozen=True)
class SelectionCheck:
    """Quantum and classical value of one charge-forbidden off-diagonal correlator."""
    left: CorrelatorSpec
    right: CorrelatorSpec
    r: float
    quantum: complex
    classical: complex

    @property
    def vanishes(self) -> bool:
        return abs(self.quantum) < IMAGINARY_TOLERANCE and abs(self.classical) < IMAGINARY_TOLERANCE


@dataclass(frozen=True)
class QCRatioReport:
    spec: CorrelatorSpec
    points: List[QCRatioPoint]
    selection_checks: List[SelectionCheck] = field(default_factory=list)

    def pairs(self) -> List[Tuple[float, float]]:
        return [(point.r, point.ratio) for point in self.points]


def forbidden_partners(spec: CorrelatorSpec, max_order: Optional[int] = None) -> List[CorrelatorSpec]:
    """Specs whose cross correlator with spec must vanish, same order first."""
    budget = max_order if max_order is not None else DEFAULT_MAX_FACTORS - spec.n
    orders = [spec.n] + [order for order in range(1, budget + 1) if order != spec.n]
    orders = [order for order in orders if spec.n + order <= DEFAULT_MAX_FACTORS]
    candidates = [other for order in orders for other in all_specs(order)]
    return [other for other in candidates if other != spec and not correlator_allowed(spec, other)]


def qc_ratio(spec: CorrelatorSpec, params_q: SteadyParams, r_values: Sequence[float],
             off_diagonal: int = 4) -> QCRatioReport:
    """Quantum over classical <B^dagger B> along r, with n0c = n0 + 1/2 for the classical state.

    Also evaluates up to off_diagonal charge-forbidden cross correlators at every r
    and records their (vanishing) values.
    """
    partners = forbidden_partners(spec, max_order=spec.n + 1)[:off_diagonal]
    points: List[QCRatioPoint] = []
    checks: List[SelectionCheck] = []

    for r in r_values:
        quantum_params = SteadyParams(r=r, n0=params_q.n0, stat=StatKind.QUANTUM)
        quantum_state = evolve_lossless(quantum_params)
        classical_state = evolve_lossless(classical_counterpart(quantum_params))

        quantum = b_correlator(quantum_state, spec)
        classical = b_correlator(classical_state, spec)
        if classical == 0.0:
            raise UndefinedRatioError(f"classical {spec} vanishes at r={r}")
        points.append(QCRatioPoint(r=r, quantum=quantum, classical=classical, ratio=quantum / classical))

        for other in partners:
            checks.append(SelectionCheck(
                left=spec, right=other, r=r,
                quantum=cross_correlator(quantum_state, spec, other),
                classical=cross_correlator(classical_state, spec, other),
            ))

    failing = [check for check in checks if not check.vanishes]
    if failing:
        logger.warning("⚠️  %d forbidden correlator(s) did not vanish for %s", len(failing), spec)
    return QCRatioReport(spec=spec, points=points, selection_checks=checks)


def sample_spec_grid(max_order: int) -> List[CorrelatorSpec]:
    """Every spec up to max_order, in order of n then alpha."""
    return [spec for order in range(1, max_order + 1) for spec in all_specs(order)]

