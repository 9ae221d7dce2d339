import logging
import math
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field

from pdcsim.dynamics.params import SteadyParams
from pdcsim.criteria.stokes import OperatorPolynomial, j_squared_polynomial
from pdcsim.errors import DomainError, UndefinedRatioError
from pdcsim.gaussian.moments import GaussianMoments
from pdcsim.gaussian.modes import StatKind
from pdcsim.gaussian.wick import wick_moment

logger = logging.getLogger(__name__)

ENTANGLEMENT_BOUND = 0.5


class CriterionReport(BaseModel):
    """Outcome of the <J^2>/<N> separability test."""
    model_config = ConfigDict(frozen=True)

    j_squared: float = Field(ge=0.0)
    total_n: float = Field(ge=0.0)
    ratio: float = Field(ge=0.0)
    entangled_flag: bool = False


@lru_cache(maxsize=1)
def _j_squared_terms() -> OperatorPolynomial:
    return j_squared_polynomial()


def expectation(moments: GaussianMoments, polynomial: OperatorPolynomial) -> complex:
    """Expectation of an operator polynomial through the Wick engine."""
    return sum((coeff * wick_moment(moments, term) for term, coeff in polynomial), 0j)


def total_number(moments: GaussianMoments) -> float:
    """<N> = trace of the normal moments."""
    return float(moments.normal.trace().real)


def j_squared(moments: GaussianMoments) -> float:
    """<J^2> of the total Stokes pseudo-spin, every string evaluated by Wick expansion."""
    value = expectation(moments, _j_squared_terms())
    # tiny negative values come from cancellation at the singlet point
    return max(float(value.real), 0.0)


def separability_ratio(moments: GaussianMoments, vacuum_limit: bool = False) -> CriterionReport:
    """<J^2>/<N>; quantum states with a ratio below 1/2 are entangled.

    At the vacuum the ratio is undefined; with vacuum_limit the limiting value 0
    is reported instead of raising.
    """
    total_n = total_number(moments)
    j2 = j_squared(moments)
    if total_n <= 0.0:
        if not vacuum_limit:
            raise UndefinedRatioError("<J^2>/<N> is undefined for a state with <N> = 0")
        return CriterionReport(j_squared=j2, total_n=0.0, ratio=0.0,
                               entangled_flag=moments.stat == StatKind.QUANTUM)

    ratio = j2 / total_n
    entangled = moments.stat == StatKind.QUANTUM and ratio < ENTANGLEMENT_BOUND
    return CriterionReport(j_squared=j2, total_n=total_n, ratio=ratio, entangled_flag=entangled)


def closed_form_ratio(params: SteadyParams) -> float:
    """Closed-form <J^2>/<N> of the lossless state, used as an oracle for the Wick path.

    <J^2> is conserved by the pair generator: 3 n0 (n0 + 1) quantum and 3 n0^2
    classical; <N> = 4 n(r).
    """
    s2 = math.sinh(params.r) ** 2
    n0 = params.n0
    if params.stat == StatKind.CLASSICAL:
        return 3.0 * n0 / (4.0 + 8.0 * s2)

    denominator = 4.0 * n0 + 4.0 * (1.0 + 2.0 * n0) * s2
    if denominator == 0.0:
        return 0.0
    return 3.0 * n0 * (n0 + 1.0) / denominator


def entanglement_threshold(n0: float) -> float:
    """Interaction parameter r* above which the quantum ratio drops below 1/2.

    sinh^2 r* = n0 (3 n0 + 1) / (2 (2 n0 + 1)).
    """
    if n0 < 0:
        raise DomainError(f"n0 must be non-negative, got {n0}")
    return math.asinh(math.sqrt(n0 * (3.0 * n0 + 1.0) / (2.0 * (2.0 * n0 + 1.0))))
