"""
Witness searches behind the `search` command.

s2c-union-failure draws random pairs of S2^c spaces on a common universe until
their family union is not S2^c, then shrinks the pair. aprime-not-coproduct walks
small augmented spaces in increasing size until the naive coproduct family
misses a mediating morphism.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from cache_manager import get_cache_manager
from category import (
    AugmentedBallSpace,
    all_augmented_structures,
    augmented_coproduct,
    check_augmented_coproduct,
    naive_coproduct,
)
from config import Bounds, get_bounds
from errors import BallSpaceError
from finite_core import FiniteBallSpace, points_of, union_families, union_of
from generators import make_rng, random_space

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2000


@dataclass(frozen=True)
class SearchResult:
    """Smallest witness found within the budget, or None."""
    target: str
    attempts: int
    witness: Optional[Dict[str, Any]] = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> Dict[str, Any]:
        return {"target": self.target, "found": self.found, "attempts": self.attempts, "witness": self.witness}


def _is_s2c(space: FiniteBallSpace, bounds: Bounds) -> bool:
    return get_cache_manager().classify(space, bounds).s2c


def _union_fails(first: FiniteBallSpace, second: FiniteBallSpace, bounds: Bounds) -> bool:
    return _is_s2c(first, bounds) and _is_s2c(second, bounds) and not _is_s2c(union_families(first, second), bounds)


def _without(space: FiniteBallSpace, ball: int) -> Optional[FiniteBallSpace]:
    rest = tuple(member for member in space.balls if member != ball)
    return FiniteBallSpace(space.universe_size, rest) if rest else None


def _compress(first: FiniteBallSpace, second: FiniteBallSpace) -> Tuple[FiniteBallSpace, FiniteBallSpace]:
    """Drop points lying in no ball of either space and renumber the rest."""
    used = points_of(union_of(first.balls + second.balls))
    position = {point: index for index, point in enumerate(used)}

    def relabel(space: FiniteBallSpace) -> FiniteBallSpace:
        balls = tuple(sum(1 << position[point] for point in points_of(ball)) for ball in space.balls)
        return FiniteBallSpace(len(used), balls)

    return relabel(first), relabel(second)


def minimize_union_failure(
    first: FiniteBallSpace,
    second: FiniteBallSpace,
    bounds: Optional[Bounds] = None,
) -> Tuple[FiniteBallSpace, FiniteBallSpace]:
    """
    Greedily remove balls while the pair still witnesses the failure, then drop unused points.

    Args:
        first: S2^c space
        second: S2^c space on the same universe whose union with first is not S2^c

    Returns:
        A pair with the same property and no removable ball
    """
    bounds = bounds or get_bounds()
    changed = True
    while changed:
        changed = False
        for side in (0, 1):
            pair = [first, second]
            for ball in pair[side].balls:
                smaller = _without(pair[side], ball)
                if smaller is None:
                    continue
                candidate = [first, second]
                candidate[side] = smaller
                if _union_fails(candidate[0], candidate[1], bounds):
                    first, second = candidate
                    changed = True
                    break
            if changed:
                break
    return _compress(first, second)


def search_s2c_union_failure(
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_size: int = 4,
    max_balls: int = 3,
    bounds: Optional[Bounds] = None,
) -> SearchResult:
    """
    Random search for two S2^c spaces whose family union is not S2^c.

    Args:
        budget: Number of random pairs to try
        seed: Generator seed
        max_size: Largest universe drawn
        max_balls: Largest number of balls drawn per space

    Returns:
        SearchResult with the minimized pair, their union and the violating family
    """
    bounds = bounds or get_bounds()
    rng = make_rng(seed)
    for attempt in range(budget):
        n = int(rng.integers(2, max(2, max_size) + 1))
        first = random_space(rng, max_balls=max_balls, universe_size=n)
        second = random_space(rng, max_balls=max_balls, universe_size=n)
        if not _union_fails(first, second, bounds):
            continue
        first, second = minimize_union_failure(first, second, bounds)
        union = union_families(first, second)
        report = get_cache_manager().classify(union, bounds)
        logger.info("s2c union failure after %d attempts on %d points", attempt + 1, union.universe_size)
        return SearchResult(
            "s2c-union-failure",
            attempt + 1,
            {
                "first": first.to_json(),
                "second": second.to_json(),
                "union": union.to_json(),
                "violating_system": [list(points_of(ball)) for ball in report.witnesses["s2c"]],
            },
        )
    return SearchResult("s2c-union-failure", budget)


def _coproduct_instances(max_size: int) -> Iterator[Tuple[AugmentedBallSpace, AugmentedBallSpace, AugmentedBallSpace]]:
    """(first component, second component, test object), smallest total size first."""
    structures = {n: all_augmented_structures(n) for n in range(1, max_size + 1)}
    sizes = sorted(
        itertools.product(range(1, max_size + 1), repeat=3),
        key=lambda triple: (sum(triple), triple),
    )
    for first_size, second_size, test_size in sizes:
        for first, second, test_object in itertools.product(
            structures[first_size], structures[second_size], structures[test_size]
        ):
            yield first, second, test_object


def search_aprime_not_coproduct(
    budget: int = DEFAULT_BUDGET,
    max_size: int = 2,
    bounds: Optional[Bounds] = None,
) -> SearchResult:
    """
    Exhaustive search for components and a test object where the naive coproduct family
    {injected balls} + {empty set, whole set} admits a cocone without a continuous mediator.

    The witness also records that the coproduct family built from all disjoint unions
    of balls passes the same test.
    """
    bounds = bounds or get_bounds()
    attempts = 0
    for first, second, test_object in _coproduct_instances(max_size):
        if attempts >= budget:
            break
        attempts += 1
        components = [first, second]
        report = check_augmented_coproduct(components, naive_coproduct(components, bounds), test_object, bounds)
        if report.holds:
            continue
        proper = check_augmented_coproduct(components, augmented_coproduct(components, bounds), test_object, bounds)
        logger.info("naive coproduct fails after %d instances", attempts)
        return SearchResult(
            "aprime-not-coproduct",
            attempts,
            {
                "components": [component.to_json() for component in components],
                "test_object": test_object.to_json(),
                "naive_family": naive_coproduct(components, bounds).to_json(),
                "counterexample": report.counterexample,
                "coproduct_family_holds": proper.holds,
            },
        )
    return SearchResult("aprime-not-coproduct", attempts)


Search = Callable[[int, int, Optional[int], Optional[Bounds]], SearchResult]

SEARCHES: Dict[str, Search] = {
    "s2c-union-failure": lambda budget, seed, max_size, bounds: search_s2c_union_failure(
        budget, seed, max_size or 4, bounds=bounds
    ),
    "aprime-not-coproduct": lambda budget, seed, max_size, bounds: search_aprime_not_coproduct(
        budget, max_size or 2, bounds
    ),
}


def list_searches() -> List[str]:
    return sorted(SEARCHES)


def run_search(
    target: str,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_size: Optional[int] = None,
    bounds: Optional[Bounds] = None,
) -> SearchResult:
    """
    Run one registered search.

    Raises:
        BallSpaceError: If the target is unknown or the budget is negative
    """
    if target not in SEARCHES:
        raise BallSpaceError(f"unknown search target {target!r}; choose from {', '.join(list_searches())}")
    if budget < 0:
        raise BallSpaceError(f"budget must be nonnegative, got {budget}")
    return SEARCHES[target](budget, seed, max_size, bounds)
