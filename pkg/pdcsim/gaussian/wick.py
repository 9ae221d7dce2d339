"""Wick expansion of even-order moments of a zero-mean Gaussian state.

Every moment is the sum over perfect matchings of the factor list, each pair
(i < j, original order kept) contributing its ordered pair expectation. The
pair expectations are read from GaussianMoments.pair_matrix(), so the quantum
commutator term of <a a^dagger> is applied automatically and classical states
use the same table without it.
"""
import logging
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple, TypeVar

from pdcsim.errors import CapacityError
from pdcsim.gaussian.moments import GaussianMoments
from pdcsim.gaussian.modes import OperatorFactor

logger = logging.getLogger(__name__)

DEFAULT_MAX_FACTORS = 16

T = TypeVar("T")


def iter_pairings(items: Iterable[T]) -> Iterator[List[Tuple[T, T]]]:
    """Yield every perfect matching of the items, pairing the first item first."""
    items = list(items)
    if len(items) == 0:
        yield []
        return

    first_item = items.pop(0)
    for i, item in enumerate(items):
        first_pair = (first_item, item)
        for pairing in iter_pairings(items[:i] + items[i + 1:]):
            yield [first_pair] + pairing


def count_pairings(n_factors: int) -> int:
    """Number of matchings enumerated for n_factors items, i.e. (n-1)!! for even n."""
    if n_factors % 2:
        return 0
    return sum(1 for _ in iter_pairings(range(n_factors)))


def wick_moment(moments: GaussianMoments, factors: Sequence[OperatorFactor],
                max_factors: int = DEFAULT_MAX_FACTORS) -> complex:
    """Expectation of the ordered product of factors under the Gaussian state."""
    if len(factors) > max_factors:
        raise CapacityError(
            f"{len(factors)} factors exceed the Wick engine cap of {max_factors}")
    if len(factors) % 2:
        return 0j

    pair = moments.pair_matrix()
    slots = [factor.index for factor in factors]

    # Memoized on the remaining positions; zero contractions prune whole subtrees.
    @lru_cache(maxsize=None)
    def contract(remaining: Tuple[int, ...]) -> complex:
        if not remaining:
            return 1.0 + 0j
        first, rest = remaining[0], remaining[1:]
        total = 0j
        for pos, partner in enumerate(rest):
            value = pair[slots[first], slots[partner]]
            if value == 0:
                continue
            total += value * contract(rest[:pos] + rest[pos + 1:])
        return total

    return complex(contract(tuple(range(len(factors)))))
