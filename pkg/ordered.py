"""
Lexicographically ordered groups of finitely supported rational sequences,
their natural valuation, ultrametric balls, order intervals and bar-bells.

An element is a finite map level -> nonzero rational. Lower levels dominate:
x < y iff the coefficient of y - x at its lowest support level is positive.
"""
import functools
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from errors import BallSpaceError, NotConvexError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction, str]


@functools.total_ordering
@dataclass(frozen=True)
class LexGroupElement:
    """Finitely supported element; coefficients are (level, value) pairs sorted by level."""
    coefficients: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        merged: Dict[int, Fraction] = {}
        for level, value in self.coefficients:
            level = int(level)
            if level < 0:
                raise BallSpaceError(f"levels are nonnegative, got {level}")
            merged[level] = merged.get(level, Fraction(0)) + Fraction(value)
        normalized = tuple(sorted((level, value) for level, value in merged.items() if value != 0))
        object.__setattr__(self, "coefficients", normalized)

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, Rational]) -> "LexGroupElement":
        return cls(tuple((int(level), Fraction(value)) for level, value in coefficients.items()))

    @classmethod
    def unit(cls, level: int, value: Rational = 1) -> "LexGroupElement":
        return cls(((level, Fraction(value)),))

    @classmethod
    def zero(cls) -> "LexGroupElement":
        return cls()

    def coefficient(self, level: int) -> Fraction:
        for stored, value in self.coefficients:
            if stored == level:
                return value
        return Fraction(0)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(level for level, _ in self.coefficients)

    def sign(self) -> int:
        if not self.coefficients:
            return 0
        return 1 if self.coefficients[0][1] > 0 else -1

    def __add__(self, other: "LexGroupElement") -> "LexGroupElement":
        return LexGroupElement(self.coefficients + other.coefficients)

    def __neg__(self) -> "LexGroupElement":
        return LexGroupElement(tuple((level, -value) for level, value in self.coefficients))

    def __sub__(self, other: "LexGroupElement") -> "LexGroupElement":
        return self + (-other)

    def scale(self, factor: Rational) -> "LexGroupElement":
        factor = Fraction(factor)
        return LexGroupElement(tuple((level, value * factor) for level, value in self.coefficients))

    def __lt__(self, other: "LexGroupElement") -> bool:
        if not isinstance(other, LexGroupElement):
            return NotImplemented
        difference = _lowest_difference(self, other)
        return difference is not None and difference[1] < 0

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{value}*e{level}" for level, value in self.coefficients)

    def to_json(self) -> Dict[str, Any]:
        return {"coeffs": {str(level): str(value) for level, value in self.coefficients}}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "LexGroupElement":
        try:
            return cls.from_mapping({int(level): Fraction(value) for level, value in payload["coeffs"].items()})
        except (KeyError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
            raise BallSpaceError(f"element object needs 'coeffs' mapping levels to rationals: {exc}") from exc


def _lowest_difference(x: LexGroupElement, y: LexGroupElement) -> Optional[Tuple[int, int]]:
    """(level, sign of x - y) at the lowest level where x and y differ, None if equal."""
    for (x_level, x_value), (y_level, y_value) in zip(x.coefficients, y.coefficients):
        if x_level < y_level:
            return x_level, 1 if x_value > 0 else -1
        if y_level < x_level:
            return y_level, -1 if y_value > 0 else 1
        if x_value != y_value:
            return x_level, 1 if x_value > y_value else -1
    common = min(len(x.coefficients), len(y.coefficients))
    if len(x.coefficients) > common:
        level, value = x.coefficients[common]
        return level, 1 if value > 0 else -1
    if len(y.coefficients) > common:
        level, value = y.coefficients[common]
        return level, -1 if value > 0 else 1
    return None


def compare(x: LexGroupElement, y: LexGroupElement) -> int:
    """-1, 0 or 1 as x is below, equal to or above y."""
    difference = _lowest_difference(x, y)
    return 0 if difference is None else difference[1]


@functools.total_ordering
@dataclass(frozen=True)
class ValueLevel:
    """A level index or infinity (level None); infinity is the maximum."""
    level: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.level is None

    def __lt__(self, other: "ValueLevel") -> bool:
        if not isinstance(other, ValueLevel):
            return NotImplemented
        if self.level is None:
            return False
        if other.level is None:
            return True
        return self.level < other.level

    def __str__(self) -> str:
        return "inf" if self.level is None else str(self.level)

    def to_json(self) -> Union[int, str]:
        return "inf" if self.level is None else self.level

    @classmethod
    def from_json(cls, payload: Union[int, str]) -> "ValueLevel":
        if payload == "inf":
            return INF
        if isinstance(payload, bool) or not isinstance(payload, int) or payload < 0:
            raise BallSpaceError(f"radius must be a nonnegative integer or 'inf', got {payload!r}")
        return cls(payload)


INF = ValueLevel(None)


def nat_valuation(x: LexGroupElement) -> ValueLevel:
    """Lowest support level (the archimedean class), infinity for zero."""
    return ValueLevel(x.coefficients[0][0]) if x.coefficients else INF


def ultrametric(x: LexGroupElement, y: LexGroupElement) -> ValueLevel:
    difference = _lowest_difference(x, y)
    return INF if difference is None else ValueLevel(difference[0])


def truncate(x: LexGroupElement, below: ValueLevel) -> LexGroupElement:
    """Keep the coefficients at levels strictly below the given level."""
    if below.is_infinite:
        return x
    return LexGroupElement(tuple(pair for pair in x.coefficients if pair[0] < below.level))


@dataclass(frozen=True)
class UltraBall:
    """Closed ball {y : u(center, y) >= radius}, the coset of center modulo levels >= radius."""
    center: LexGroupElement
    radius: ValueLevel

    def contains(self, x: LexGroupElement) -> bool:
        return ultrametric(self.center, x) >= self.radius

    def same_set(self, other: "UltraBall") -> bool:
        return self.radius == other.radius and self.contains(other.center)

    def __str__(self) -> str:
        return f"B_{self.radius}({self.center})"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "ball", "center": self.center.to_json(), "radius": self.radius.to_json()}


@dataclass(frozen=True)
class OrderInterval:
    """Closed bounded interval [lo, hi]."""
    lo: LexGroupElement
    hi: LexGroupElement

    def __post_init__(self):
        if self.hi < self.lo:
            raise BallSpaceError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    def contains(self, x: LexGroupElement) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "interval", "lo": self.lo.to_json(), "hi": self.hi.to_json()}


Component = Union[OrderInterval, UltraBall]


@dataclass(frozen=True)
class BarBell:
    """B_alpha(a) united with [a, b] and B_beta(b)."""
    left_radius: ValueLevel
    a: LexGroupElement
    b: LexGroupElement
    right_radius: ValueLevel

    def __post_init__(self):
        if self.b < self.a:
            raise BallSpaceError(f"bar-bell endpoints out of order: {self.a} > {self.b}")

    def components(self) -> Tuple[UltraBall, OrderInterval, UltraBall]:
        return (
            UltraBall(self.a, self.left_radius),
            OrderInterval(self.a, self.b),
            UltraBall(self.b, self.right_radius),
        )

    def contains(self, x: LexGroupElement) -> bool:
        return any(component.contains(x) for component in self.components())

    def __str__(self) -> str:
        return f"B_{self.left_radius}({self.a}) u [{self.a}, {self.b}] u B_{self.right_radius}({self.b})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "alpha": self.left_radius.to_json(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "beta": self.right_radius.to_json(),
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "BarBell":
        try:
            return cls(
                ValueLevel.from_json(payload["alpha"]),
                LexGroupElement.from_json(payload["a"]),
                LexGroupElement.from_json(payload["b"]),
                ValueLevel.from_json(payload["beta"]),
            )
        except KeyError as exc:
            raise BallSpaceError(f"bar-bell object is missing {exc}") from exc


def component_from_json(payload: Dict[str, Any]) -> Component:
    kind = payload.get("kind")
    try:
        if kind == "ball":
            return UltraBall(LexGroupElement.from_json(payload["center"]), ValueLevel.from_json(payload["radius"]))
        if kind == "interval":
            return OrderInterval(LexGroupElement.from_json(payload["lo"]), LexGroupElement.from_json(payload["hi"]))
    except KeyError as exc:
        raise BallSpaceError(f"{kind} object is missing {exc}") from exc
    raise BallSpaceError(f"component kind must be 'ball' or 'interval', got {kind!r}")


def ball_of(x: LexGroupElement, y: LexGroupElement) -> UltraBall:
    """Smallest ball around x containing y; the same set as ball_of(y, x)."""
    return UltraBall(x, ultrametric(x, y))


def ball_contains(ball: UltraBall, x: LexGroupElement) -> bool:
    return ball.contains(x)


def interval_contains(interval: OrderInterval, x: LexGroupElement) -> bool:
    return interval.contains(x)


def barbell_contains(barbell: BarBell, x: LexGroupElement) -> bool:
    return barbell.contains(x)


def ultra_subset(inner: UltraBall, outer: UltraBall) -> bool:
    return inner.radius >= outer.radius and ultrametric(inner.center, outer.center) >= outer.radius


class Position(Enum):
    BELOW = "entirely_below"
    CONTAINS = "contains"
    ABOVE = "entirely_above"


def coset_position(ball: UltraBall, x: LexGroupElement) -> Position:
    """
    Where the ball lies relative to x.

    Coset elements share the coefficients below the radius level with the center,
    so comparing those truncations decides the position.
    """
    center_part = truncate(ball.center, ball.radius)
    x_part = truncate(x, ball.radius)
    if center_part == x_part:
        return Position.CONTAINS
    return Position.BELOW if center_part < x_part else Position.ABOVE


def intersects(first: Component, second: Component) -> bool:
    if isinstance(first, OrderInterval) and isinstance(second, OrderInterval):
        return max(first.lo, second.lo) <= min(first.hi, second.hi)
    if isinstance(first, UltraBall) and isinstance(second, UltraBall):
        return ultrametric(first.center, second.center) >= min(first.radius, second.radius)
    ball, interval = (first, second) if isinstance(first, UltraBall) else (second, first)
    return coset_position(ball, interval.lo) != Position.BELOW and coset_position(ball, interval.hi) != Position.ABOVE


def intersect_balls(first: UltraBall, second: UltraBall) -> Optional[UltraBall]:
    """The smaller ball when they meet; None when disjoint."""
    if not intersects(first, second):
        return None
    return first if first.radius >= second.radius else second


def intersect_intervals(first: OrderInterval, second: OrderInterval) -> Optional[OrderInterval]:
    lo = max(first.lo, second.lo)
    hi = min(first.hi, second.hi)
    return OrderInterval(lo, hi) if lo <= hi else None


def separating_element(lower: LexGroupElement, upper: LexGroupElement) -> LexGroupElement:
    """
    An element strictly between two elements, built at the lowest level where they differ.

    Raises:
        BallSpaceError: If lower is not strictly below upper
    """
    if not lower < upper:
        raise BallSpaceError(f"{lower} is not strictly below {upper}")
    level = nat_valuation(upper - lower)
    midpoint = (lower.coefficient(level.level) + upper.coefficient(level.level)) / 2
    return truncate(lower, level) + LexGroupElement.unit(level.level, midpoint)


def _representative(component: Component, upper_side: bool) -> LexGroupElement:
    if isinstance(component, OrderInterval):
        return component.hi if upper_side else component.lo
    return component.center


def _connected_groups(components: Sequence[Component]) -> List[int]:
    parent = list(range(len(components)))

    def find(index: int) -> int:
        while parent[index] != index:
            parent[index] = parent[parent[index]]
            index = parent[index]
        return index

    for i, j in itertools.combinations(range(len(components)), 2):
        if intersects(components[i], components[j]):
            parent[find(i)] = find(j)
    return [find(index) for index in range(len(components))]


def find_gap(components: Sequence[Component]) -> Optional[Tuple[LexGroupElement, Component, Component]]:
    """
    An element outside the union lying between two of its components, or None if the union is convex.

    Returns:
        (witness, component below it, component above it) or None
    """
    if not components:
        raise BallSpaceError("a union needs at least one component")
    members: Dict[int, List[Component]] = {}
    for component, group in zip(components, _connected_groups(components)):
        members.setdefault(group, []).append(component)
    if len(members) == 1:
        return None
    # group unions are disjoint and convex, so any member orders them
    lowest, next_up = sorted(
        members.values(), key=lambda group: _representative(group[0], upper_side=False)
    )[:2]
    below = max(lowest, key=lambda component: _representative(component, upper_side=True))
    above = min(next_up, key=lambda component: _representative(component, upper_side=False))
    witness = separating_element(
        _representative(below, upper_side=True), _representative(above, upper_side=False)
    )
    return witness, below, above


def is_convex_union(components: Sequence[Component]) -> bool:
    """A union of convex pieces is convex iff their intersection graph is connected."""
    return find_gap(components) is None


def normalize_to_barbell(components: Sequence[Component]) -> BarBell:
    """
    Rewrite a convex union of intervals and balls as a bar-bell.

    Interval endpoints outside every ball get a singleton ball; of the resulting balls
    only the maximal ones are kept, and those with the least and the greatest center
    become the two ends.

    Raises:
        NotConvexError: If the union has a gap
    """
    gap = find_gap(components)
    if gap is not None:
        witness, below, above = gap
        raise NotConvexError(witness, below, above)
    balls = [component for component in components if isinstance(component, UltraBall)]
    for component in components:
        if isinstance(component, OrderInterval):
            for endpoint in (component.lo, component.hi):
                if not any(ball.contains(endpoint) for ball in balls):
                    balls.append(UltraBall(endpoint, INF))
    maximal: List[UltraBall] = []
    for ball in balls:
        if any(ultra_subset(ball, other) and not other.same_set(ball) for other in balls):
            continue
        if any(kept.same_set(ball) for kept in maximal):
            continue
        maximal.append(ball)
    lowest = min(maximal, key=lambda ball: ball.center)
    highest = max(maximal, key=lambda ball: ball.center)
    logger.debug("normalized %d components to %d maximal balls", len(components), len(maximal))
    return BarBell(lowest.radius, lowest.center, highest.center, highest.radius)


def _relevant_levels(points: Iterable[LexGroupElement], components: Sequence[Component]) -> List[int]:
    levels = set()
    for point in points:
        levels.update(point.support)
    for component in components:
        if isinstance(component, UltraBall) and not component.radius.is_infinite:
            levels.add(component.radius.level)
    levels.update(level + 1 for level in list(levels))
    levels.add(0)
    return sorted(levels)


def membership_sample(components: Sequence[Component]) -> List[LexGroupElement]:
    """
    Deterministic test points: endpoints, centers, midpoints of neighbouring base points,
    and each base point moved by +-1 and +-1000 at every relevant level.
    """
    base = set()
    for component in components:
        if isinstance(component, OrderInterval):
            base.update((component.lo, component.hi, (component.lo + component.hi).scale(Fraction(1, 2))))
        else:
            base.add(component.center)
    ordered_base = sorted(base)
    base.update((left + right).scale(Fraction(1, 2)) for left, right in zip(ordered_base, ordered_base[1:]))
    sample = set(base)
    for level in _relevant_levels(base, components):
        for step in (1, -1, 1000, -1000):
            shift = LexGroupElement.unit(level, step)
            sample.update(point + shift for point in base)
    return sorted(sample)


def union_contains(components: Sequence[Component], x: LexGroupElement) -> bool:
    return any(component.contains(x) for component in components)


def ball_equals_interval(
    ball: UltraBall, interval: OrderInterval, sample: Optional[Sequence[LexGroupElement]] = None
) -> bool:
    """
    Membership of the ball and the interval agrees on every sample point.

    Without an explicit sample the deterministic sample of the pair is used; it holds
    both interval endpoints and their neighbours at the radius level, so distinct sets
    always disagree on it.
    """
    points = membership_sample([ball, interval]) if sample is None else sample
    return all(ball.contains(x) == interval.contains(x) for x in points)


def _meet_agrees(first: Component, second: Component, meet: Component) -> bool:
    sample = membership_sample([first, second])
    return all(meet.contains(x) == (first.contains(x) and second.contains(x)) for x in sample)


def _intersections_closed(balls: Sequence[UltraBall], intervals: Sequence[OrderInterval]) -> bool:
    for first, second in itertools.combinations(balls, 2):
        meet = intersect_balls(first, second)
        if meet is not None and not _meet_agrees(first, second, meet):
            return False
    for first, second in itertools.combinations(intervals, 2):
        meet = intersect_intervals(first, second)
        if meet is not None and not _meet_agrees(first, second, meet):
            return False
    return True


def check_barbell_properties(instances: Sequence[Sequence[Component]]) -> Dict[str, Any]:
    """
    Check the bar-bell facts on convex unions of intervals and balls.

    Returns a dict with:
        at_most_three: each normalized bar-bell has at most three components and
            agrees with its input on the membership sample
        coincidences_are_singletons: no ball has the same members as a non-singleton
            interval (compared on the pair's sample)
        intersections_closed: pairwise nonempty intersections of balls are balls and
            of intervals are intervals (checked on the pair's sample)
        checked: number of instances
    """
    at_most_three = True
    singletons = True
    closed = True
    for components in instances:
        barbell = normalize_to_barbell(components)
        pieces = barbell.components()
        everything = list(dict.fromkeys(list(components) + list(pieces)))
        if at_most_three:
            sample = membership_sample(everything)
            if len(pieces) > 3 or any(union_contains(components, x) != barbell.contains(x) for x in sample):
                at_most_three = False
        balls = [c for c in everything if isinstance(c, UltraBall)]
        intervals = [c for c in everything if isinstance(c, OrderInterval)]
        if singletons and any(
            interval.lo != interval.hi and ball_equals_interval(ball, interval)
            for ball, interval in itertools.product(balls, intervals)
        ):
            singletons = False
        if closed and not _intersections_closed(balls, intervals):
            closed = False
    return {
        "at_most_three": at_most_three,
        "coincidences_are_singletons": singletons,
        "intersections_closed": closed,
        "checked": len(instances),
    }
