"""
Finite ball spaces: validation, exact hierarchy classification and closure operations.

Sets are Python ints used as bit vectors over the points 0..n-1. Families are kept
in canonical order (by size, then by sorted point tuple) so greedy operations are
deterministic.
"""
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import Bounds, get_bounds
from errors import (
    BallSpaceError,
    EmptyBallError,
    EmptyFamilyError,
    EnumerationBoundExceededError,
    NotASubfamilyError,
    NotCenteredError,
    NotMaximalError,
    OutOfRangePointError,
    UniverseMismatchError,
)

logger = logging.getLogger(__name__)

FLAG_NAMES = ("s1", "s2", "s3", "s4", "s1c", "s2c", "s3c", "s4c")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def points_of(mask: int) -> Tuple[int, ...]:
    """Sorted points of a bit-vector set."""
    points = []
    index = 0
    while mask:
        if mask & 1:
            points.append(index)
        mask >>= 1
        index += 1
    return tuple(points)


def mask_of(points: Iterable[int], universe_size: Optional[int] = None) -> int:
    """
    Build a bit-vector set from points.

    Args:
        points: Point indices
        universe_size: If given, every point must be below it

    Returns:
        The set as an int

    Raises:
        OutOfRangePointError: If a point is negative or outside the universe
    """
    mask = 0
    for point in points:
        point = int(point)
        if point < 0 or (universe_size is not None and point >= universe_size):
            raise OutOfRangePointError(point, universe_size if universe_size is not None else 0)
        mask |= 1 << point
    return mask


def full_mask(universe_size: int) -> int:
    return (1 << universe_size) - 1


def is_subset(inner: int, outer: int) -> bool:
    return inner & ~outer == 0


def canonical_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    return popcount(mask), points_of(mask)


def canonical_family(masks: Iterable[int]) -> Tuple[int, ...]:
    """Deduplicate and sort a family canonically."""
    return tuple(sorted(set(masks), key=canonical_key))


def intersection_of(family: Iterable[int]) -> int:
    members = list(family)
    if not members:
        raise EmptyFamilyError("intersection of an empty family is undefined here")
    return reduce(lambda left, right: left & right, members)


def union_of(family: Iterable[int]) -> int:
    return reduce(lambda left, right: left | right, family, 0)


@dataclass(frozen=True)
class FiniteBallSpace:
    """
    A ball space on the points 0..universe_size-1.

    The family is deduplicated and stored in canonical order on construction.
    """
    universe_size: int
    balls: Tuple[int, ...]
    _ball_set: FrozenSet[int] = field(init=False, repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        if self.universe_size < 1:
            raise BallSpaceError(f"universe size must be positive, got {self.universe_size}")
        family = canonical_family(int(ball) for ball in self.balls)
        if not family:
            raise EmptyFamilyError("a ball space needs at least one ball")
        full = full_mask(self.universe_size)
        for ball in family:
            if ball == 0:
                raise EmptyBallError("balls must be nonempty")
            if ball < 0 or not is_subset(ball, full):
                outside = points_of(ball & ~full)[0] if ball > 0 else -1
                raise OutOfRangePointError(outside, self.universe_size)
        object.__setattr__(self, "balls", family)
        object.__setattr__(self, "_ball_set", frozenset(family))

    @property
    def full(self) -> int:
        return full_mask(self.universe_size)

    @property
    def ball_set(self) -> FrozenSet[int]:
        return self._ball_set

    def __contains__(self, mask: object) -> bool:
        return mask in self._ball_set

    def __len__(self) -> int:
        return len(self.balls)

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.universe_size, "balls": [list(points_of(ball)) for ball in self.balls]}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "FiniteBallSpace":
        try:
            universe_size = int(payload["n"])
            raw_balls = payload["balls"]
        except (KeyError, TypeError, ValueError) as exc:
            raise BallSpaceError(f"space object needs integer 'n' and list 'balls': {exc}") from exc
        if not isinstance(raw_balls, list):
            raise BallSpaceError("'balls' must be a list of point lists")
        return new_space(universe_size, raw_balls)


def new_space(universe_size: int, balls: Sequence[Iterable[int]]) -> FiniteBallSpace:
    """
    Validate and build a ball space from point lists.

    Args:
        universe_size: Number of points n (points are 0..n-1)
        balls: Each ball as an iterable of points

    Returns:
        FiniteBallSpace with a deduplicated family

    Raises:
        EmptyFamilyError, EmptyBallError, OutOfRangePointError
    """
    if universe_size < 1:
        raise BallSpaceError(f"universe size must be positive, got {universe_size}")
    masks = []
    for ball in balls:
        mask = mask_of(ball, universe_size)
        if mask == 0:
            raise EmptyBallError("balls must be nonempty")
        masks.append(mask)
    if not masks:
        raise EmptyFamilyError("a ball space needs at least one ball")
    return FiniteBallSpace(universe_size, tuple(masks))


@dataclass(frozen=True)
class Family:
    """A nonempty subfamily of balls, stored canonically."""
    members: Tuple[int, ...]

    def __post_init__(self):
        members = canonical_family(self.members)
        if not members:
            raise EmptyFamilyError("a family of balls must be nonempty")
        object.__setattr__(self, "members", members)

    @property
    def intersection(self) -> int:
        return intersection_of(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self.members


class Nest(Family):
    """A family totally ordered by inclusion."""

    def __post_init__(self):
        super().__post_init__()
        if not _pairwise_comparable(self.members):
            raise BallSpaceError("nest members must be comparable by inclusion")


class CenteredSystem(Family):
    """A family with the finite intersection property."""

    def __post_init__(self):
        super().__post_init__()
        if self.intersection == 0:
            raise NotCenteredError("centered system has empty intersection")


@dataclass(frozen=True)
class HierarchyReport:
    """Exact hierarchy flags with a violating family for every false flag."""
    s1: bool
    s2: bool
    s3: bool
    s4: bool
    s1c: bool
    s2c: bool
    s3c: bool
    s4c: bool
    witnesses: Dict[str, Tuple[int, ...]] = field(default_factory=dict, compare=False)

    def flags(self) -> Dict[str, bool]:
        return {name: getattr(self, name) for name in FLAG_NAMES}

    def is_consistent(self) -> bool:
        """Check S4 => S3 => S2 => S1, the same for centered variants, and S_i^c => S_i."""
        flags = self.flags()
        for suffix in ("", "c"):
            chain = [flags[f"s{i}{suffix}"] for i in (4, 3, 2, 1)]
            for stronger, weaker in zip(chain, chain[1:]):
                if stronger and not weaker:
                    return False
        for i in (1, 2, 3, 4):
            if flags[f"s{i}c"] and not flags[f"s{i}"]:
                return False
        return set(self.witnesses) == {name for name, value in flags.items() if not value}

    def to_json(self) -> Dict[str, Any]:
        return {
            "flags": self.flags(),
            "witnesses": {
                name: [list(points_of(member)) for member in family]
                for name, family in sorted(self.witnesses.items())
            },
        }


def _pairwise_comparable(members: Sequence[int]) -> bool:
    for i, left in enumerate(members):
        for right in members[i + 1:]:
            if not (is_subset(left, right) or is_subset(right, left)):
                return False
    return True


def _as_subfamily(space: FiniteBallSpace, family: Iterable[int]) -> Tuple[int, ...]:
    members = canonical_family(family)
    if not members:
        raise EmptyFamilyError("family must be nonempty")
    for member in members:
        if member not in space:
            raise NotASubfamilyError(member)
    return members


def _check_bounds(space: FiniteBallSpace, bounds: Bounds) -> None:
    if len(space.balls) > bounds.max_balls:
        raise EnumerationBoundExceededError(
            f"{len(space.balls)} balls exceed the enumeration bound {bounds.max_balls}"
        )
    if space.universe_size > bounds.max_points:
        raise EnumerationBoundExceededError(
            f"{space.universe_size} points exceed the enumeration bound {bounds.max_points}"
        )


def is_nest(space: FiniteBallSpace, family: Iterable[int]) -> bool:
    return _pairwise_comparable(_as_subfamily(space, family))


def is_centered(space: FiniteBallSpace, family: Iterable[int]) -> bool:
    # On a finite family the finite intersection property is the whole intersection.
    return intersection_of(_as_subfamily(space, family)) != 0


def contains_ball(space: FiniteBallSpace, region: int) -> bool:
    return any(is_subset(ball, region) for ball in space.balls)


def largest_ball_in(space: FiniteBallSpace, region: int) -> Optional[int]:
    """
    The ball inside region that contains every ball inside region, if any.

    Args:
        space: Ball space
        region: Bit-vector subset of the universe

    Returns:
        The largest ball or None
    """
    inside = [ball for ball in space.balls if is_subset(ball, region)]
    if not inside:
        return None
    hull = union_of(inside)
    return hull if hull in space else None


def maximal_chains(space: FiniteBallSpace) -> Iterator[Tuple[int, ...]]:
    """Yield every maximal chain as a path through the covering relation, smallest ball first."""
    balls = space.balls
    covers: Dict[int, List[int]] = {}
    for ball in balls:
        above = [other for other in balls if other != ball and is_subset(ball, other)]
        covers[ball] = [
            candidate for candidate in above
            if not any(mid != candidate and is_subset(mid, candidate) for mid in above)
        ]
    minimal = [
        ball for ball in balls
        if not any(other != ball and is_subset(other, ball) for other in balls)
    ]

    def walk(path: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        nexts = covers[path[-1]]
        if not nexts:
            yield path
            return
        for successor in nexts:
            yield from walk(path + (successor,))

    for start in minimal:
        yield from walk((start,))


def chain_intersections(space: FiniteBallSpace) -> Dict[int, Tuple[int, ...]]:
    """
    Every distinct intersection of a chain, mapped to one chain realizing it.

    Chains are grown in increasing size, so each step adds a strict superset of the
    last member. States (intersection, last member) are visited once.
    """
    found: Dict[int, Tuple[int, ...]] = {}
    seen = set()
    stack: List[Tuple[int, int, Tuple[int, ...]]] = [(ball, ball, (ball,)) for ball in reversed(space.balls)]
    while stack:
        meet, last, chain = stack.pop()
        if (meet, last) in seen:
            continue
        seen.add((meet, last))
        found.setdefault(meet, chain)
        for ball in space.balls:
            if ball != last and is_subset(last, ball):
                stack.append((meet & ball, ball, chain + (ball,)))
    return found


def maximal_centered_systems(space: FiniteBallSpace) -> List[Tuple[int, ...]]:
    """
    All maximal centered systems.

    A centered family has a common point x, so it sits inside the family of balls
    containing x; the maximal ones among those families are exactly the maximal
    centered systems.
    """
    by_point = []
    for point in range(space.universe_size):
        bit = 1 << point
        members = tuple(ball for ball in space.balls if ball & bit)
        if members and members not in by_point:
            by_point.append(members)
    as_sets = [frozenset(members) for members in by_point]
    return [
        members for members, current in zip(by_point, as_sets)
        if not any(current < other for other in as_sets)
    ]


def centered_intersections(space: FiniteBallSpace) -> Dict[int, Tuple[int, ...]]:
    """Every distinct nonempty intersection of a subfamily, mapped to one subfamily realizing it."""
    found: Dict[int, Tuple[int, ...]] = {ball: (ball,) for ball in space.balls}
    frontier = list(space.balls)
    while frontier:
        next_frontier = []
        for meet in frontier:
            witness = found[meet]
            for ball in space.balls:
                narrowed = meet & ball
                if narrowed and narrowed not in found:
                    found[narrowed] = canonical_family(witness + (ball,))
                    next_frontier.append(narrowed)
        frontier = next_frontier
    return found


def _first_violation(
    candidates: Iterable[Tuple[int, Tuple[int, ...]]], test
) -> Optional[Tuple[int, ...]]:
    for meet, family in candidates:
        if not test(meet):
            return canonical_family(family)
    return None


def classify(space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> HierarchyReport:
    """
    Exact S1-S4 and S1^c-S4^c flags of a finite ball space.

    S1 and S2 are decided on maximal chains, S3 and S4 on every chain intersection;
    S1^c and S2^c on maximal centered systems, S3^c and S4^c on every centered
    subfamily intersection.

    Args:
        space: Ball space to classify
        bounds: Enumeration bounds (defaults to the configured ones)

    Returns:
        HierarchyReport with witnesses for false flags

    Raises:
        EnumerationBoundExceededError: If the family or universe is too large
    """
    bounds = bounds or get_bounds()
    _check_bounds(space, bounds)

    nonempty = lambda meet: meet != 0  # noqa: E731
    has_ball = lambda meet: contains_ball(space, meet)  # noqa: E731
    has_largest = lambda meet: largest_ball_in(space, meet) is not None  # noqa: E731
    is_ball = lambda meet: meet in space  # noqa: E731

    chains = [(intersection_of(chain), chain) for chain in maximal_chains(space)]
    chain_meets = list(chain_intersections(space).items())
    maximal_centered = [(intersection_of(family), family) for family in maximal_centered_systems(space)]
    centered_meets = list(centered_intersections(space).items())
    logger.debug(
        "classify: %d maximal chains, %d chain meets, %d maximal centered, %d centered meets",
        len(chains), len(chain_meets), len(maximal_centered), len(centered_meets),
    )

    witnesses: Dict[str, Tuple[int, ...]] = {}
    checks = {
        "s1": (chains, nonempty),
        "s2": (chains, has_ball),
        "s3": (chain_meets, has_largest),
        "s4": (chain_meets, is_ball),
        "s1c": (maximal_centered, nonempty),
        "s2c": (maximal_centered, has_ball),
        "s3c": (centered_meets, has_largest),
        "s4c": (centered_meets, is_ball),
    }
    for name, (candidates, test) in checks.items():
        violation = _first_violation(candidates, test)
        if violation is not None:
            witnesses[name] = violation
    return HierarchyReport(**{name: name not in witnesses for name in FLAG_NAMES}, witnesses=witnesses)


def union_families(first: FiniteBallSpace, second: FiniteBallSpace) -> FiniteBallSpace:
    """Ball space whose family is the union of both families."""
    if first.universe_size != second.universe_size:
        raise UniverseMismatchError(
            f"universes differ: {first.universe_size} vs {second.universe_size} points"
        )
    return FiniteBallSpace(first.universe_size, first.balls + second.balls)


def f_un_closure(space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> FiniteBallSpace:
    """
    Close the family under finite unions.

    Args:
        space: Ball space
        bounds: Enumeration bounds

    Returns:
        The smallest union-closed family containing the balls
    """
    bounds = bounds or get_bounds()
    _check_bounds(space, bounds)
    family = set(space.balls)
    frontier = list(space.balls)
    while frontier:
        next_frontier = []
        for member in frontier:
            for ball in space.balls:
                joined = member | ball
                if joined not in family:
                    family.add(joined)
                    next_frontier.append(joined)
        frontier = next_frontier
    return FiniteBallSpace(space.universe_size, tuple(family))


def extend_to_maximal_centered(space: FiniteBallSpace, seed: Iterable[int]) -> CenteredSystem:
    """
    Greedily extend a centered seed to a maximal centered system.

    Candidate balls are tried in canonical family order, so the result is
    deterministic even though maximal extensions are not unique.

    Raises:
        NotCenteredError: If the seed has empty intersection
    """
    members = list(_as_subfamily(space, seed))
    meet = intersection_of(members)
    if meet == 0:
        raise NotCenteredError("seed family has empty intersection")
    chosen = set(members)
    for ball in space.balls:
        if ball not in chosen and meet & ball:
            chosen.add(ball)
            meet &= ball
    return CenteredSystem(tuple(chosen))


def extract_base_subsystem(
    base: FiniteBallSpace,
    system: Iterable[int],
    closure: Optional[FiniteBallSpace] = None,
) -> CenteredSystem:
    """
    Balls of the base family inside a maximal centered system of its union closure.

    The returned subsystem has the same intersection as the given system.

    Args:
        base: The generating ball space
        system: Maximal centered system of f_un_closure(base)
        closure: Precomputed closure, if available

    Raises:
        NotCenteredError: If the system has empty intersection
        NotMaximalError: If some closure ball could still be added
    """
    closure = closure or f_un_closure(base)
    members = _as_subfamily(closure, system)
    meet = intersection_of(members)
    if meet == 0:
        raise NotCenteredError("system has empty intersection")
    chosen = set(members)
    for ball in closure.balls:
        if ball not in chosen and meet & ball:
            raise NotMaximalError(ball)
    return CenteredSystem(tuple(member for member in members if member in base))


def is_pseudo_convex(space: FiniteBallSpace, sequence: Sequence[int]) -> bool:
    """True iff consecutive members of the ball sequence intersect."""
    if not sequence:
        raise EmptyFamilyError("sequence must be nonempty")
    for member in sequence:
        if member not in space:
            raise NotASubfamilyError(member)
    return all(left & right for left, right in zip(sequence, sequence[1:]))


def pseudo_convex_closure(space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> FiniteBallSpace:
    """
    Close the family under unions of pseudo convex collections.

    Experimental: no preservation claim is attached. Joining intersecting pairs
    until nothing changes yields every union of a pseudo convex collection, since
    a prefix union of such a sequence meets the next member.
    """
    bounds = bounds or get_bounds()
    _check_bounds(space, bounds)
    family = set(space.balls)
    changed = True
    while changed:
        changed = False
        members = sorted(family, key=canonical_key)
        for i, left in enumerate(members):
            for right in members[i + 1:]:
                if left & right:
                    joined = left | right
                    if joined not in family:
                        family.add(joined)
                        changed = True
    return FiniteBallSpace(space.universe_size, tuple(family))
