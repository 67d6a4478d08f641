"""
Seeded random instances for property checks and witness searches.
All generators take a numpy Generator so runs are reproducible from a seed.
"""
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from finite_core import FiniteBallSpace, full_mask, is_subset
from maps import BallMap
from ordered import INF, LexGroupElement, OrderInterval, UltraBall, ValueLevel
from symbolic import GeometricFamily, Interval, RationalSet, canonical_rset


def make_rng(seed: Optional[int] = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_mask(rng: np.random.Generator, universe_size: int) -> int:
    """A uniformly random nonempty subset."""
    return int(rng.integers(1, full_mask(universe_size) + 1))


def random_space(
    rng: np.random.Generator,
    max_points: int = 5,
    max_balls: int = 6,
    universe_size: Optional[int] = None,
) -> FiniteBallSpace:
    """
    Random ball space.

    Args:
        rng: numpy Generator
        max_points: Upper bound on the universe size
        max_balls: Upper bound on the number of drawn balls (duplicates collapse)
        universe_size: Fixed universe size, if given

    Returns:
        FiniteBallSpace
    """
    n = universe_size if universe_size is not None else int(rng.integers(1, max_points + 1))
    count = int(rng.integers(1, max_balls + 1))
    return FiniteBallSpace(n, tuple(random_mask(rng, n) for _ in range(count)))


def random_table(rng: np.random.Generator, domain_size: int, codomain_size: int) -> Tuple[int, ...]:
    return tuple(int(value) for value in rng.integers(0, codomain_size, size=domain_size))


def random_surjection(rng: np.random.Generator, domain_size: int, codomain_size: int) -> Tuple[int, ...]:
    """Random table hitting every target point; needs domain_size >= codomain_size."""
    values = list(range(codomain_size)) + [
        int(value) for value in rng.integers(0, codomain_size, size=domain_size - codomain_size)
    ]
    order = rng.permutation(domain_size)
    return tuple(values[int(index)] for index in order)


def random_map(rng: np.random.Generator, max_points: int = 4, max_balls: int = 5) -> BallMap:
    domain = random_space(rng, max_points, max_balls)
    codomain = random_space(rng, max_points, max_balls)
    return BallMap(domain, codomain, random_table(rng, domain.universe_size, codomain.universe_size))


def random_continuous_map(
    rng: np.random.Generator,
    max_points: int = 4,
    max_balls: int = 4,
    extra_balls: int = 2,
    codomain: Optional[FiniteBallSpace] = None,
) -> BallMap:
    """
    Random continuous map: the domain family contains every preimage of a codomain ball.
    """
    codomain = codomain or random_space(rng, max_points, max_balls)
    n = int(rng.integers(codomain.universe_size, max(codomain.universe_size, max_points) + 2))
    table = random_surjection(rng, n, codomain.universe_size)
    draft = BallMap(FiniteBallSpace(n, (full_mask(n),)), codomain, table)
    balls = [draft.preimage(ball) for ball in codomain.balls]
    balls.extend(random_mask(rng, n) for _ in range(int(rng.integers(0, extra_balls + 1))))
    return BallMap(FiniteBallSpace(n, tuple(balls)), codomain, table)


def random_closed_map(
    rng: np.random.Generator,
    max_points: int = 4,
    max_balls: int = 4,
    extra_balls: int = 2,
    domain: Optional[FiniteBallSpace] = None,
) -> BallMap:
    """Random closed map: the codomain family contains every image of a domain ball."""
    domain = domain or random_space(rng, max_points, max_balls)
    m = int(rng.integers(1, max_points + 1))
    table = random_table(rng, domain.universe_size, m)
    draft = BallMap(domain, FiniteBallSpace(m, (full_mask(m),)), table)
    balls = [draft.image(ball) for ball in domain.balls]
    balls.extend(random_mask(rng, m) for _ in range(int(rng.integers(0, extra_balls + 1))))
    return BallMap(domain, FiniteBallSpace(m, tuple(balls)), table)


def random_nest(rng: np.random.Generator, space: FiniteBallSpace) -> Tuple[int, ...]:
    """Random nest: a random walk upward through comparable balls."""
    start = space.balls[int(rng.integers(0, len(space.balls)))]
    nest: List[int] = [start]
    while True:
        above = [ball for ball in space.balls if ball != nest[-1] and is_subset(nest[-1], ball)]
        if not above or rng.random() < 0.3:
            return tuple(nest)
        nest.append(above[int(rng.integers(0, len(above)))])


def random_element(rng: np.random.Generator, max_level: int = 3, max_coefficient: int = 5) -> LexGroupElement:
    """Random element with small rational coefficients on levels 0..max_level."""
    coefficients = {}
    for level in range(max_level + 1):
        if rng.random() < 0.6:
            numerator = int(rng.integers(-max_coefficient, max_coefficient + 1))
            denominator = int(rng.integers(1, 4))
            coefficients[level] = Fraction(numerator, denominator)
    return LexGroupElement.from_mapping(coefficients)


def random_radius(rng: np.random.Generator, max_level: int = 3) -> ValueLevel:
    """Radius in 1..max_level or infinity; radius 0 would be the whole group."""
    if rng.random() < 0.25:
        return INF
    return ValueLevel(int(rng.integers(1, max_level + 1)))


def random_ball(rng: np.random.Generator, max_level: int = 3) -> UltraBall:
    return UltraBall(random_element(rng, max_level), random_radius(rng, max_level))


def random_interval(rng: np.random.Generator, max_level: int = 3) -> OrderInterval:
    first = random_element(rng, max_level)
    second = random_element(rng, max_level)
    return OrderInterval(min(first, second), max(first, second))


def _point_inside(component) -> LexGroupElement:
    return component.hi if isinstance(component, OrderInterval) else component.center


def random_convex_union(rng: np.random.Generator, max_components: int = 4, max_level: int = 3) -> List:
    """Chain of components, each meeting the previous one."""
    components = [random_ball(rng, max_level) if rng.random() < 0.5 else random_interval(rng, max_level)]
    for _ in range(int(rng.integers(0, max_components))):
        anchor = _point_inside(components[-1])
        if rng.random() < 0.5:
            components.append(UltraBall(anchor, random_radius(rng, max_level)))
        else:
            step = random_element(rng, max_level)
            components.append(OrderInterval(min(anchor, anchor + step), max(anchor, anchor + step)))
    return components


def random_nonconvex_union(rng: np.random.Generator, max_components: int = 4, max_level: int = 3) -> List:
    """A convex union plus one ball pushed far away at level 0, leaving a gap."""
    components = random_convex_union(rng, max_components, max_level)
    reach = max(
        abs(point.coefficient(0))
        for component in components
        for point in ((component.lo, component.hi) if isinstance(component, OrderInterval) else (component.center,))
    )
    offset = random_element(rng, max_level)
    far = offset + LexGroupElement.unit(0, reach + 1000 - offset.coefficient(0))
    components.append(UltraBall(far, ValueLevel(1)))
    return components


def _random_fraction(rng: np.random.Generator, denominator: int, low: int = 0, high: Optional[int] = None) -> Fraction:
    high = denominator if high is None else high
    return Fraction(int(rng.integers(low, high + 1)), denominator)


def random_rational_set(
    rng: np.random.Generator,
    max_intervals: int = 3,
    max_families: int = 2,
    denominator: int = 12,
) -> RationalSet:
    """
    Random canonical rational set inside [0, 1].

    Endpoints and single points sit on a grid of step 1/denominator (removals and
    additions on the half grid). Families use ratios 1/2, 1/3 and 1/4, so dependent
    and independent pairs both occur.
    """
    intervals = []
    for _ in range(int(rng.integers(0, max_intervals + 1))):
        lo = Fraction(0) if rng.random() < 0.4 else _random_fraction(rng, denominator, 0, denominator - 1)
        hi = _random_fraction(rng, denominator, int(lo * denominator) + 1, denominator)
        intervals.append(Interval(lo, bool(rng.random() < 0.7), hi, bool(rng.random() < 0.3)))
    families = []
    for _ in range(int(rng.integers(0, max_families + 1))):
        ratio = Fraction(1, int(rng.choice([2, 3, 4])))
        families.append(GeometricFamily(ratio ** int(rng.integers(1, 4)), ratio))
    removed = [_random_fraction(rng, 2 * denominator) for _ in range(int(rng.integers(0, 3)))]
    added = [_random_fraction(rng, 2 * denominator) for _ in range(int(rng.integers(0, 3)))]
    return canonical_rset(intervals, families, removed, added)


def rational_sample(sets: List[RationalSet], denominator: int = 48, terms: int = 8) -> List[Fraction]:
    """Grid points of [-1/denominator, 1 + 1/denominator] plus the leading terms of every removed family."""
    points = {Fraction(k, denominator) for k in range(-1, denominator + 2)}
    for rset in sets:
        points.update(rset.added)
        for interval in rset.intervals:
            points.update((interval.start, interval.end))
        for family in rset.removed:
            points.update(family.terms(terms))
            points.add(family.first / family.ratio)
    return sorted(points)
