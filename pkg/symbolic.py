"""
Exact symbolic sets for the infinite examples.

A RationalSet is a finite union of disjoint rational intervals, minus finitely many
geometric families {base * ratio**j : j >= start}, plus finitely many isolated
points. Finite removals are folded into the intervals (a removed interior point
splits its interval), so only the infinite removals stay as families.

Geometric families are compared through the prime factorizations of their ratios
and of the quotient of their first terms: the indices where two families meet are
empty, a single index, or an arithmetic progression. Membership of a given rational
is tested by repeated division, never by logarithms. All arithmetic is Fraction.

Nest descriptors name three infinite nests and decide emptiness of their
intersection per kind.
"""
import functools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import factorint, prime
from sympy.core.intfunc import igcdex

from config import Bounds, get_bounds
from errors import BallSpaceError, SizeBoundExceededError, UnsupportedCombinationError
from finite_core import FiniteBallSpace, maximal_chains, points_of
from ordered import LexGroupElement, UltraBall, ValueLevel, ultra_subset

logger = logging.getLogger(__name__)

RationalLike = Union[int, str, Fraction]

WITNESS_DENOMINATOR = 64
WITNESS_TERMS = 64
COPRODUCT_CHECKPOINTS = (1, 10, 100, 1000)


def _fraction(value: RationalLike) -> Fraction:
    if isinstance(value, (float, bool)):
        raise BallSpaceError(f"exact rationals only, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise BallSpaceError(f"not a rational: {value!r}") from exc


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Bounded rational interval; a closed degenerate interval is a single point."""
    start: Fraction
    start_open: bool
    end: Fraction
    end_closed: bool

    def __post_init__(self):
        object.__setattr__(self, "start", _fraction(self.start))
        object.__setattr__(self, "end", _fraction(self.end))
        if self.start_tuple > self.end_tuple:
            raise BallSpaceError(f"empty interval {self}")

    @property
    def start_tuple(self) -> Tuple[Fraction, int]:
        return self.start, 1 if self.start_open else 0

    @property
    def end_tuple(self) -> Tuple[Fraction, int]:
        return self.end, 0 if self.end_closed else -1

    @property
    def is_degenerate(self) -> bool:
        return self.start == self.end

    def contains(self, x: Fraction) -> bool:
        return self.start_tuple <= (x, 0) <= self.end_tuple

    def __str__(self) -> str:
        left = "(" if self.start_open else "["
        right = "]" if self.end_closed else ")"
        return f"{left}{self.start}, {self.end}{right}"

    def to_json(self) -> Dict[str, Any]:
        return {
            "start": str(self.start),
            "start_open": self.start_open,
            "end": str(self.end),
            "end_closed": self.end_closed,
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Interval":
        try:
            return cls(payload["start"], bool(payload["start_open"]), payload["end"], bool(payload["end_closed"]))
        except (KeyError, TypeError) as exc:
            raise BallSpaceError(f"interval object needs start, start_open, end, end_closed: {exc}") from exc


def _between(start: Tuple[Fraction, int], end: Tuple[Fraction, int]) -> Optional[Interval]:
    if start > end:
        return None
    return Interval(start[0], start[1] == 1, end[0], end[1] == 0)


def _touches(left: Interval, right: Interval) -> bool:
    return right.start_tuple <= (left.end, left.end_tuple[1] + 1)


def _merge_intervals(intervals: Sequence[Interval]) -> List[Interval]:
    merged: List[Interval] = []
    for interval in sorted(intervals, key=lambda item: item.start_tuple):
        if merged and _touches(merged[-1], interval):
            last = merged[-1]
            merged[-1] = _between(last.start_tuple, max(last.end_tuple, interval.end_tuple))
        else:
            merged.append(interval)
    return merged


def _meet(first: Interval, second: Interval) -> Optional[Interval]:
    return _between(max(first.start_tuple, second.start_tuple), min(first.end_tuple, second.end_tuple))


def _subtract(interval: Interval, other: Interval) -> List[Interval]:
    left_end = (other.start, 0 if other.start_open else -1)
    right_start = (other.end, 1 if other.end_closed else 0)
    pieces = [
        _between(interval.start_tuple, min(interval.end_tuple, left_end)),
        _between(max(interval.start_tuple, right_start), interval.end_tuple),
    ]
    return [piece for piece in pieces if piece is not None]


def _remove_points(intervals: Sequence[Interval], points: Sequence[Fraction]) -> List[Interval]:
    pieces = list(intervals)
    for point in points:
        pieces = [part for piece in pieces for part in _subtract(piece, Interval(point, False, point, True))]
    return pieces


def _in_intervals(intervals: Sequence[Interval], x: Fraction) -> bool:
    return any(interval.contains(x) for interval in intervals)


# ---------------------------------------------------------------------------
# Geometric families
# ---------------------------------------------------------------------------

def _power_index(quotient: Fraction, ratio: Fraction, steps: int) -> Optional[int]:
    """The j with quotient == ratio**j, by repeated division; None if there is none."""
    if quotient <= 0 or quotient > 1:
        return None
    index = 0
    while quotient < 1:
        quotient /= ratio
        index += 1
        if index > steps:
            raise UnsupportedCombinationError(f"power test needs more than {steps} divisions")
    return index if quotient == 1 else None


@dataclass(frozen=True, eq=False)
class GeometricFamily:
    """
    The points base * ratio**j for j >= start.

    Two families are equal when they denote the same set, i.e. share first term and ratio.
    """
    base: Fraction
    ratio: Fraction
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base", _fraction(self.base))
        object.__setattr__(self, "ratio", _fraction(self.ratio))
        if self.base <= 0:
            raise BallSpaceError(f"family base must be positive, got {self.base}")
        if not 0 < self.ratio < 1:
            raise BallSpaceError(f"family ratio must lie in (0, 1), got {self.ratio}")
        if int(self.start) != self.start or self.start < 0:
            raise BallSpaceError(f"family start must be a nonnegative integer, got {self.start}")
        object.__setattr__(self, "start", int(self.start))

    @property
    def first(self) -> Fraction:
        return self.base * self.ratio ** self.start

    @property
    def key(self) -> Tuple[Fraction, Fraction]:
        return self.first, self.ratio

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeometricFamily) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def term(self, index: int) -> Fraction:
        """The index-th member counted from the first one."""
        return self.first * self.ratio ** index

    def terms(self, count: int) -> List[Fraction]:
        return [self.term(index) for index in range(count)]

    def tail(self, offset: int) -> "GeometricFamily":
        return GeometricFamily(self.base, self.ratio, self.start + offset)

    def index_of(self, x: Fraction, bounds: Optional[Bounds] = None) -> Optional[int]:
        bounds = bounds or get_bounds()
        return _power_index(_fraction(x) / self.first, self.ratio, bounds.series_steps)

    def contains(self, x: Fraction, bounds: Optional[Bounds] = None) -> bool:
        return self.index_of(x, bounds) is not None

    def is_below(self, bound: Fraction) -> bool:
        """Every member is < bound; the family decreases, so the first term decides."""
        return self.first < bound

    def __str__(self) -> str:
        return f"{{{self.base}*({self.ratio})^j : j >= {self.start}}}"

    def to_json(self) -> Dict[str, Any]:
        return {"base": str(self.base), "ratio": str(self.ratio), "start": self.start}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "GeometricFamily":
        try:
            return cls(payload["base"], payload["ratio"], int(payload.get("start", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise BallSpaceError(f"family object needs base, ratio and start: {exc}") from exc


def _exponents(value: Fraction) -> Dict[int, int]:
    vector = {int(p): int(e) for p, e in factorint(value.numerator).items()}
    for p, e in factorint(value.denominator).items():
        vector[int(p)] = vector.get(int(p), 0) - int(e)
    return {p: e for p, e in vector.items() if e != 0}


def _ceil_div(numerator: int, denominator: int) -> int:
    return -((-numerator) // denominator)


def _independent_overlap(
    u: Dict[int, int], v: Dict[int, int], w: Dict[int, int], primes: List[int]
) -> Optional[Tuple[int, int]]:
    for p_index, p in enumerate(primes):
        for q in primes[p_index + 1:]:
            det = v.get(p, 0) * u.get(q, 0) - u.get(p, 0) * v.get(q, 0)
            if det:
                break
        else:
            continue
        break
    else:
        raise UnsupportedCombinationError("independent ratios without a nonsingular prime pair")
    j = Fraction(v.get(p, 0) * w.get(q, 0) - w.get(p, 0) * v.get(q, 0), det)
    k = Fraction(u.get(p, 0) * w.get(q, 0) - u.get(q, 0) * w.get(p, 0), det)
    if j.denominator != 1 or k.denominator != 1 or j < 0 or k < 0:
        return None
    if any(j * u.get(r, 0) - k * v.get(r, 0) != w.get(r, 0) for r in primes):
        return None
    return int(j), 0


def _dependent_overlap(
    u: Dict[int, int], v: Dict[int, int], w: Dict[int, int], primes: List[int]
) -> Optional[Tuple[int, int]]:
    alpha = functools.reduce(math.gcd, (abs(u.get(p, 0)) for p in primes))
    g = {p: u.get(p, 0) // alpha for p in primes}
    pivot = next(p for p in primes if g[p])
    beta = Fraction(v.get(pivot, 0), g[pivot])
    gamma = Fraction(w.get(pivot, 0), g[pivot])
    if beta.denominator != 1 or beta <= 0:
        raise UnsupportedCombinationError("ratios below 1 must be positive powers of one generator")
    if gamma.denominator != 1 or any(w.get(p, 0) != gamma * g[p] for p in primes):
        return None
    beta, gamma = int(beta), int(gamma)
    # alpha*j - beta*k = gamma over j, k >= 0
    x, y, d = (int(value) for value in igcdex(alpha, beta))
    if gamma % d:
        return None
    j0, k0 = x * (gamma // d), -y * (gamma // d)
    step_j, step_k = beta // d, alpha // d
    t = max(_ceil_div(-j0, step_j), _ceil_div(-k0, step_k))
    return j0 + t * step_j, step_j


def _index_overlap(family: GeometricFamily, other: GeometricFamily) -> Optional[Tuple[int, int]]:
    """
    Indices j of family whose term lies in other.

    Returns:
        None when the families are disjoint, (j, 0) for a single common term,
        or (j1, step) for the progression j1, j1 + step, ...
    """
    u = _exponents(family.ratio)
    v = _exponents(other.ratio)
    w = _exponents(other.first / family.first)
    primes = sorted(set(u) | set(v) | set(w))
    parallel = all(u.get(p, 0) * v.get(q, 0) == u.get(q, 0) * v.get(p, 0) for p in primes for q in primes)
    if parallel:
        return _dependent_overlap(u, v, w, primes)
    return _independent_overlap(u, v, w, primes)


def family_intersection(
    first: GeometricFamily, second: GeometricFamily
) -> Union[None, Fraction, GeometricFamily]:
    """
    Exact intersection of two geometric families.

    Returns:
        None if disjoint, the common point if there is exactly one, otherwise the
        family of common points
    """
    overlap = _index_overlap(first, second)
    if overlap is None:
        return None
    index, step = overlap
    if step == 0:
        return first.term(index)
    return GeometricFamily(first.term(index), first.ratio ** step)


FamilyPart = Tuple[List[GeometricFamily], List[Fraction]]


def _minimal_period(flags: List[bool], threshold: int, period: int) -> int:
    for candidate in range(1, period + 1):
        if period % candidate == 0 and all(
            flags[threshold + offset] == flags[threshold + offset % candidate] for offset in range(period)
        ):
            return candidate
    return period


def _partition_family(
    family: GeometricFamily,
    predicate: Callable[[Fraction], bool],
    thresholds: Sequence[Fraction],
    others: Sequence[GeometricFamily],
    bounds: Bounds,
) -> Tuple[FamilyPart, FamilyPart]:
    """
    Split family members into those satisfying predicate and the rest.

    predicate must be constant on (0, min positive threshold) except on members of
    the families in others; then the index pattern is eventually periodic and is
    read off exactly from finitely many evaluations.

    Returns:
        (inside, outside), each a list of subfamilies plus a list of single points
    """
    steps = bounds.series_steps
    threshold = 0
    positive = [t for t in thresholds if t > 0]
    if positive:
        low = min(positive)
        while family.term(threshold) >= low:
            threshold += 1
            if threshold > steps:
                raise UnsupportedCombinationError(f"family needs more than {steps} terms to pass {low}")
    period = 1
    for other in others:
        overlap = _index_overlap(family, other)
        if overlap is None:
            continue
        index, step = overlap
        if step == 0:
            threshold = max(threshold, index + 1)
        else:
            threshold = max(threshold, index)
            period = period * step // math.gcd(period, step)
    if period > steps:
        raise UnsupportedCombinationError(f"family pattern period {period} exceeds {steps}")

    flags = [predicate(family.term(index)) for index in range(threshold + period)]
    period = _minimal_period(flags, threshold, period)
    while threshold > 0 and flags[threshold - 1] == flags[threshold - 1 + period]:
        threshold -= 1
    if period > 1:
        logger.debug("family %s splits with period %d from index %d", family, period, threshold)

    inside: FamilyPart = ([], [])
    outside: FamilyPart = ([], [])
    for index in range(threshold):
        (inside if flags[index] else outside)[1].append(family.term(index))
    if period == 1:
        target = inside if flags[threshold] else outside
        target[0].append(family if threshold == 0 else family.tail(threshold))
    else:
        for offset in range(period):
            index = threshold + offset
            target = inside if flags[index] else outside
            target[0].append(GeometricFamily(family.term(index), family.ratio ** period))
    return inside, outside


# ---------------------------------------------------------------------------
# Rational sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalSet:
    """
    (union of intervals minus union of removed families) plus added points.

    Canonical form: intervals sorted and maximally merged; every family member lies
    in an interval; added points lie outside every interval.
    Build instances through canonical_rset or the rset_* constructors.
    """
    intervals: Tuple[Interval, ...] = ()
    removed: Tuple[GeometricFamily, ...] = ()
    added: Tuple[Fraction, ...] = ()

    @property
    def thresholds(self) -> List[Fraction]:
        """Positive interval endpoints and added points."""
        values = [value for interval in self.intervals for value in (interval.start, interval.end)]
        values.extend(self.added)
        return [value for value in values if value > 0]

    def __str__(self) -> str:
        if not self.intervals and not self.added:
            return "{}"
        text = " u ".join(str(interval) for interval in self.intervals)
        if self.removed:
            text += " minus " + " u ".join(str(family) for family in self.removed)
        if self.added:
            points = "{" + ", ".join(str(point) for point in self.added) + "}"
            text = f"{text} u {points}" if text else points
        return text

    def to_json(self) -> Dict[str, Any]:
        return {
            "intervals": [interval.to_json() for interval in self.intervals],
            "removed": [family.to_json() for family in self.removed],
            "added": [str(point) for point in self.added],
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "RationalSet":
        try:
            intervals = [Interval.from_json(item) for item in payload.get("intervals", [])]
            families = [GeometricFamily.from_json(item) for item in payload.get("removed", [])]
            added = [_fraction(item) for item in payload.get("added", [])]
        except AttributeError as exc:
            raise BallSpaceError(f"rational set object needs intervals, removed, added: {exc}") from exc
        return canonical_rset(intervals, families, added=added)


def _extend_backwards(families: List[GeometricFamily], pieces: List[Interval]) -> Tuple[List[GeometricFamily], List[Interval]]:
    """Absorb an isolated gap point sitting right above a family's first term."""
    changed = True
    while changed:
        changed = False
        for position, family in enumerate(families):
            above = family.first / family.ratio
            for index in range(len(pieces) - 1):
                left, right = pieces[index], pieces[index + 1]
                if left.end == above == right.start and not left.end_closed and right.start_open:
                    pieces[index:index + 2] = [Interval(left.start, left.start_open, right.end, right.end_closed)]
                    if family.start > 0:
                        families[position] = GeometricFamily(family.base, family.ratio, family.start - 1)
                    else:
                        families[position] = GeometricFamily(above, family.ratio)
                    changed = True
                    break
            if changed:
                break
    return families, pieces


def _drop_subsumed(families: List[GeometricFamily]) -> List[GeometricFamily]:
    unique: List[GeometricFamily] = []
    for family in families:
        if family not in unique:
            unique.append(family)
    kept = [
        family for family in unique
        if not any(other != family and _index_overlap(family, other) == (0, 1) for other in unique)
    ]
    return sorted(kept, key=lambda family: (-family.first, family.ratio))


def canonical_rset(
    intervals: Sequence[Interval] = (),
    families: Sequence[GeometricFamily] = (),
    removed_points: Sequence[RationalLike] = (),
    added: Sequence[RationalLike] = (),
    bounds: Optional[Bounds] = None,
) -> RationalSet:
    """
    Canonical form of (union of intervals minus families minus points) plus added points.

    Args:
        intervals: Intervals, in any order, possibly overlapping
        families: Removed geometric families; members outside the intervals are ignored
        removed_points: Removed single points
        added: Points in the set regardless of the removals
        bounds: Step limits for the family arithmetic

    Returns:
        Canonical RationalSet

    Raises:
        UnsupportedCombinationError: If a family pattern exceeds the step limits
    """
    bounds = bounds or get_bounds()
    added_points = sorted({_fraction(point) for point in added})
    added_lookup = set(added_points)
    removed = sorted({_fraction(point) for point in removed_points} - added_lookup)
    pieces = _remove_points(_merge_intervals(list(intervals)), removed)

    kept: List[GeometricFamily] = []
    for family in families:
        thresholds = [value for piece in pieces for value in (piece.start, piece.end)] + added_points
        (inside_families, inside_points), _ = _partition_family(
            family,
            lambda x, pieces=pieces: _in_intervals(pieces, x) and x not in added_lookup,
            thresholds,
            (),
            bounds,
        )
        kept.extend(inside_families)
        pieces = _remove_points(pieces, inside_points)

    merged = _merge_intervals(pieces + [Interval(point, False, point, True) for point in added_points])
    pieces = [interval for interval in merged if not interval.is_degenerate]
    isolated = tuple(interval.start for interval in merged if interval.is_degenerate)
    kept, pieces = _extend_backwards(kept, pieces)
    return RationalSet(tuple(pieces), tuple(_drop_subsumed(kept)), isolated)


def rset_open_interval(lo: RationalLike, hi: RationalLike) -> RationalSet:
    """The open interval (lo, hi); empty when lo >= hi."""
    lo, hi = _fraction(lo), _fraction(hi)
    if lo >= hi:
        return RationalSet()
    return RationalSet((Interval(lo, True, hi, False),))


def rset_from_points(points: Sequence[RationalLike]) -> RationalSet:
    return canonical_rset(added=points)


def rset_contains(rset: RationalSet, x: RationalLike, bounds: Optional[Bounds] = None) -> bool:
    x = _fraction(x)
    if x in rset.added:
        return True
    if not _in_intervals(rset.intervals, x):
        return False
    return not any(family.contains(x, bounds) for family in rset.removed)


def _outside_of(
    families: Sequence[GeometricFamily], other: RationalSet, bounds: Bounds
) -> FamilyPart:
    outside_families: List[GeometricFamily] = []
    outside_points: List[Fraction] = []
    for family in families:
        _, (part_families, part_points) = _partition_family(
            family,
            lambda x: rset_contains(other, x, bounds),
            other.thresholds,
            other.removed,
            bounds,
        )
        outside_families.extend(part_families)
        outside_points.extend(part_points)
    return outside_families, outside_points


def rset_union(first: RationalSet, second: RationalSet, bounds: Optional[Bounds] = None) -> RationalSet:
    """
    Exact union. A removed member of one side stays removed only if the other side misses it.
    """
    bounds = bounds or get_bounds()
    first_families, first_points = _outside_of(first.removed, second, bounds)
    second_families, second_points = _outside_of(second.removed, first, bounds)
    return canonical_rset(
        first.intervals + second.intervals,
        first_families + second_families,
        first_points + second_points,
        first.added + second.added,
        bounds,
    )


def rset_intersect(first: RationalSet, second: RationalSet, bounds: Optional[Bounds] = None) -> RationalSet:
    """Exact intersection."""
    bounds = bounds or get_bounds()
    pieces = [meet for a in first.intervals for b in second.intervals for meet in [_meet(a, b)] if meet is not None]
    added = [point for point in first.added if rset_contains(second, point, bounds)]
    added += [point for point in second.added if rset_contains(first, point, bounds)]
    return canonical_rset(pieces, first.removed + second.removed, (), added, bounds)


def rset_subset(inner: RationalSet, outer: RationalSet, bounds: Optional[Bounds] = None) -> bool:
    """
    Decide inner ⊆ outer.

    A nondegenerate part of an inner interval outside every outer interval is uncountable
    and can never be covered; single uncovered points and removed members of outer inside
    an inner interval must be removed from inner too, or added to outer.
    """
    bounds = bounds or get_bounds()
    if not all(rset_contains(outer, point, bounds) for point in inner.added):
        return False
    outer_added = set(outer.added)

    def removed_from_inner(x: Fraction) -> bool:
        return any(family.contains(x, bounds) for family in inner.removed)

    for interval in inner.intervals:
        gaps = [interval]
        for piece in outer.intervals:
            gaps = [part for gap in gaps for part in _subtract(gap, piece)]
        for gap in gaps:
            if not gap.is_degenerate:
                return False
            if gap.start not in outer_added and not removed_from_inner(gap.start):
                return False
        thresholds = [interval.start, interval.end] + list(outer.added)
        for family in outer.removed:
            (hit_families, hit_points), _ = _partition_family(
                family,
                lambda x, interval=interval: interval.contains(x) and x not in outer_added and not removed_from_inner(x),
                thresholds,
                inner.removed,
                bounds,
            )
            if hit_families or hit_points:
                return False
    return True


def rset_equal(first: RationalSet, second: RationalSet, bounds: Optional[Bounds] = None) -> bool:
    return rset_subset(first, second, bounds) and rset_subset(second, first, bounds)


def rset_is_empty(rset: RationalSet) -> bool:
    """A canonical set is empty iff it has no interval and no point; removals are countable."""
    return not rset.intervals and not rset.added


# ---------------------------------------------------------------------------
# The prime counterexample
# ---------------------------------------------------------------------------

def nth_prime(index: int, bounds: Optional[Bounds] = None) -> int:
    """
    The index-th prime (p_1 = 2) from the sieve.

    Raises:
        BallSpaceError: If index < 1
        SizeBoundExceededError: If index is beyond the configured prime index bound
    """
    bounds = bounds or get_bounds()
    if index < 1:
        raise BallSpaceError(f"prime indices start at 1, got {index}")
    if index > bounds.max_prime_index + 1:
        raise SizeBoundExceededError(f"prime index {index} exceeds {bounds.max_prime_index + 1}")
    return int(prime(index))


def example_start_index(i: int, bounds: Optional[Bounds] = None) -> int:
    """Least j with p_i**j > p_(i+1)."""
    p, q = nth_prime(i, bounds), nth_prime(i + 1, bounds)
    j = 1
    while p ** j <= q:
        j += 1
    return j


def build_example_ball(i: int, bounds: Optional[Bounds] = None) -> RationalSet:
    """
    B_i = (0, 1/p_i) minus {1/p_i**j : p_i**j > p_(i+1)}.

    Args:
        i: Index, at least 1
        bounds: Prime index limit

    Returns:
        The ball as a canonical RationalSet
    """
    p = nth_prime(i, bounds)
    family = GeometricFamily(Fraction(1), Fraction(1, p), example_start_index(i, bounds))
    return canonical_rset([Interval(0, True, Fraction(1, p), False)], [family], bounds=bounds)


@dataclass(frozen=True)
class IncomparabilityReport:
    i: int
    j: int
    incomparable: bool
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "i": self.i,
            "j": self.j,
            "incomparable": self.incomparable,
            "x": None if self.x is None else str(self.x),
            "y": None if self.y is None else str(self.y),
        }


def _witness_candidates(sets: Sequence[RationalSet]) -> Iterator[Fraction]:
    for denominator in range(2, WITNESS_DENOMINATOR + 1):
        for numerator in range(1, denominator):
            if math.gcd(numerator, denominator) == 1:
                yield Fraction(numerator, denominator)
    for rset in sets:
        for interval in rset.intervals:
            yield interval.start
            yield interval.end
        for family in rset.removed:
            yield from family.terms(WITNESS_TERMS)


def _find_difference(first: RationalSet, second: RationalSet, bounds: Bounds) -> Optional[Fraction]:
    for candidate in _witness_candidates([first, second]):
        if rset_contains(first, candidate, bounds) and not rset_contains(second, candidate, bounds):
            return candidate
    return None


def verify_example_incomparable(i: int, j: int, bounds: Optional[Bounds] = None) -> IncomparabilityReport:
    """
    Witnesses x in B_i minus B_j and y in B_j minus B_i.

    Raises:
        BallSpaceError: If i == j
    """
    if i == j:
        raise BallSpaceError(f"incomparability needs two different indices, got {i} twice")
    bounds = bounds or get_bounds()
    first, second = build_example_ball(i, bounds), build_example_ball(j, bounds)
    x = _find_difference(first, second, bounds)
    y = _find_difference(second, first, bounds)
    return IncomparabilityReport(i, j, x is not None and y is not None, x, y)


def verify_example_union(i: int, bounds: Optional[Bounds] = None) -> bool:
    """B_i u B_(i+1) == (0, 1/p_i)."""
    bounds = bounds or get_bounds()
    union = rset_union(build_example_ball(i, bounds), build_example_ball(i + 1, bounds), bounds)
    return rset_equal(union, rset_open_interval(0, Fraction(1, nth_prime(i, bounds))), bounds)


# ---------------------------------------------------------------------------
# Nest descriptors
# ---------------------------------------------------------------------------

class NestKind(Enum):
    PRIME_GAP_UNION = "PrimeGapUnion"
    FINAL_SEGMENTS = "FinalSegments"
    LEX_ULTRA_NEST = "LexUltraNest"


@dataclass(frozen=True)
class FinalSegment:
    """{least, least + 1, ...} in the natural numbers."""
    least: int

    def contains(self, k: int) -> bool:
        return k >= self.least

    def __str__(self) -> str:
        return f"{{{self.least}, {self.least + 1}, ...}}"


NestMember = Union[RationalSet, FinalSegment, UltraBall]
NestPoint = Union[Fraction, int, LexGroupElement]


@dataclass(frozen=True)
class NestDescriptor:
    """
    One of three infinite nests, indexed n = 0, 1, 2, ...

    PrimeGapUnion: B_(start+n) u B_(start+n+1).
    FinalSegments: {start+n, start+n+1, ...}.
    LexUltraNest: the ball of radius n around the sum of s_l * e_l for l < n, where the
    coordinate stream s is prefix followed by period repeated forever.
    """
    kind: NestKind
    start: int = 0
    prefix: Tuple[Fraction, ...] = ()
    period: Tuple[Fraction, ...] = (Fraction(0),)

    def __post_init__(self):
        object.__setattr__(self, "kind", NestKind(self.kind))
        object.__setattr__(self, "prefix", tuple(_fraction(value) for value in self.prefix))
        object.__setattr__(self, "period", tuple(_fraction(value) for value in self.period))
        if self.kind == NestKind.PRIME_GAP_UNION and self.start < 1:
            raise BallSpaceError(f"prime indices start at 1, got {self.start}")
        if self.start < 0:
            raise BallSpaceError(f"start must be nonnegative, got {self.start}")
        if not self.period:
            raise BallSpaceError("a coordinate period needs at least one entry")

    def coordinate(self, level: int) -> Fraction:
        if level < len(self.prefix):
            return self.prefix[level]
        return self.period[(level - len(self.prefix)) % len(self.period)]

    def center(self, n: int) -> LexGroupElement:
        return LexGroupElement.from_mapping({level: self.coordinate(level) for level in range(n)})

    def member(self, n: int, bounds: Optional[Bounds] = None) -> NestMember:
        if n < 0:
            raise BallSpaceError(f"nest members are indexed from 0, got {n}")
        if self.kind == NestKind.PRIME_GAP_UNION:
            index = self.start + n
            return rset_union(build_example_ball(index, bounds), build_example_ball(index + 1, bounds), bounds)
        if self.kind == NestKind.FINAL_SEGMENTS:
            return FinalSegment(self.start + n)
        return UltraBall(self.center(n), ValueLevel(n))

    def member_contains(self, member: NestMember, x: NestPoint, bounds: Optional[Bounds] = None) -> bool:
        if self.kind == NestKind.PRIME_GAP_UNION:
            return rset_contains(member, x, bounds)
        return member.contains(x)

    def prefix_point(self, n: int, bounds: Optional[Bounds] = None) -> NestPoint:
        """A point of member n, hence of every earlier member."""
        if self.kind == NestKind.PRIME_GAP_UNION:
            return Fraction(1, 2 * nth_prime(self.start + n, bounds))
        if self.kind == NestKind.FINAL_SEGMENTS:
            return self.start + n
        return self.center(n)

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind == NestKind.LEX_ULTRA_NEST:
            payload["prefix"] = [str(value) for value in self.prefix]
            payload["period"] = [str(value) for value in self.period]
        else:
            payload["start"] = self.start
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "NestDescriptor":
        try:
            kind = NestKind(payload["kind"])
        except (KeyError, TypeError, ValueError) as exc:
            kinds = ", ".join(item.value for item in NestKind)
            raise BallSpaceError(f"descriptor needs 'kind' in {kinds}: {exc}") from exc
        if kind == NestKind.LEX_ULTRA_NEST:
            return lex_ultra_nest(payload.get("prefix", []), payload.get("period", ["0"]))
        if kind == NestKind.PRIME_GAP_UNION:
            return prime_gap_union(int(payload.get("start", 1)))
        return final_segments(int(payload.get("start", 0)))


def prime_gap_union(start: int = 1) -> NestDescriptor:
    return NestDescriptor(NestKind.PRIME_GAP_UNION, start=start)


def final_segments(start: int = 0) -> NestDescriptor:
    return NestDescriptor(NestKind.FINAL_SEGMENTS, start=start)


def lex_ultra_nest(prefix: Sequence[RationalLike], period: Sequence[RationalLike] = (0,)) -> NestDescriptor:
    return NestDescriptor(NestKind.LEX_ULTRA_NEST, prefix=tuple(prefix), period=tuple(period))


def _member_subset(descriptor: NestDescriptor, inner: NestMember, outer: NestMember, bounds: Bounds) -> bool:
    if descriptor.kind == NestKind.PRIME_GAP_UNION:
        return rset_subset(inner, outer, bounds)
    if descriptor.kind == NestKind.FINAL_SEGMENTS:
        return inner.least >= outer.least
    return ultra_subset(inner, outer)


def check_prefix_nested(descriptor: NestDescriptor, length: int = 64, bounds: Optional[Bounds] = None) -> bool:
    """member(n+1) ⊆ member(n) for every n < length."""
    bounds = bounds or get_bounds()
    members = [descriptor.member(n, bounds) for n in range(length + 1)]
    return all(_member_subset(descriptor, members[n + 1], members[n], bounds) for n in range(length))


@dataclass(frozen=True)
class NestCertificate:
    descriptor: NestDescriptor
    empty: bool
    rule: str
    limit: Optional[LexGroupElement] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "descriptor": self.descriptor.to_json(),
            "empty": self.empty,
            "rule": self.rule,
            "limit": None if self.limit is None else self.limit.to_json(),
            "details": self.details,
        }


def nest_intersection_empty(descriptor: NestDescriptor, bounds: Optional[Bounds] = None) -> NestCertificate:
    """
    Decide whether the intersection of the nest is empty, by kind.

    PrimeGapUnion: member n equals (0, 1/p_(start+n)); the open left end stays at 0 and
    the right ends decrease to 0, so no rational survives.
    FinalSegments: the least elements are unbounded.
    LexUltraNest: a common point must agree with the coordinate stream at every level;
    it exists iff the stream is eventually zero, and then it is the finite sum.
    """
    bounds = bounds or get_bounds()
    if descriptor.kind == NestKind.PRIME_GAP_UNION:
        indices = [descriptor.start + n for n in range(3)]
        return NestCertificate(
            descriptor,
            True,
            "monotone-endpoint",
            details={
                "left_endpoint": "0",
                "left_open": True,
                "right_endpoints": [str(Fraction(1, nth_prime(index, bounds))) for index in indices],
                "union_identity": {str(index): verify_example_union(index, bounds) for index in indices},
            },
        )
    if descriptor.kind == NestKind.FINAL_SEGMENTS:
        return NestCertificate(
            descriptor,
            True,
            "unbounded-start",
            details={"least_elements": [descriptor.start + n for n in range(5)]},
        )
    nonzero = [offset for offset, value in enumerate(descriptor.period) if value != 0]
    if nonzero:
        return NestCertificate(
            descriptor,
            True,
            "infinite-support",
            details={"period": [str(value) for value in descriptor.period], "nonzero_offsets": nonzero},
        )
    limit = LexGroupElement.from_mapping(dict(enumerate(descriptor.prefix)))
    return NestCertificate(
        descriptor,
        False,
        "eventually-zero",
        limit=limit,
        details={"support": list(limit.support)},
    )


# ---------------------------------------------------------------------------
# Coproducts with a complete component
# ---------------------------------------------------------------------------

Component = Union[NestDescriptor, FiniteBallSpace]


@dataclass(frozen=True)
class CoproductNestReport:
    """Designated nest of a disjoint union: its intersection is the disjoint union of intersections."""
    component_verdicts: Tuple[bool, ...]
    empty: bool
    limit: Optional[Tuple[int, Any]]
    prefix_consistent: bool
    checkpoints: Tuple[int, ...]
    escapes: Dict[str, List[Optional[int]]] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        limit = None
        if self.limit is not None:
            index, point = self.limit
            limit = {"component": index, "point": point.to_json() if isinstance(point, LexGroupElement) else str(point)}
        return {
            "component_empty": list(self.component_verdicts),
            "empty": self.empty,
            "limit": limit,
            "prefix_consistent": self.prefix_consistent,
            "checkpoints": list(self.checkpoints),
            "escapes": self.escapes,
        }


def _finite_nest(space: FiniteBallSpace) -> Tuple[int, ...]:
    """A maximal chain, largest ball first; it stabilizes at its smallest ball."""
    chain = next(maximal_chains(space), None)
    if chain is None:
        raise BallSpaceError("space has no chain")
    return tuple(reversed(chain))


def _component_verdict(component: Component, bounds: Bounds) -> Tuple[bool, Optional[Any]]:
    if isinstance(component, FiniteBallSpace):
        return False, points_of(_finite_nest(component)[-1])[0]
    certificate = nest_intersection_empty(component, bounds)
    return certificate.empty, certificate.limit


def _component_contains(component: Component, n: int, x: Any, bounds: Bounds) -> bool:
    if isinstance(component, FiniteBallSpace):
        chain = _finite_nest(component)
        return bool(chain[min(n, len(chain) - 1)] >> x & 1)
    return component.member_contains(component.member(n, bounds), x, bounds)


def _escape_index(component: NestDescriptor, n: int, bounds: Bounds) -> Optional[int]:
    """First m > n whose member misses the prefix point of member n."""
    point = component.prefix_point(n, bounds)
    for m in range(n + 1, n + 1 + bounds.series_steps):
        if not component.member_contains(component.member(m, bounds), point, bounds):
            return m
    return None


def coproduct_with_complete_component(
    component: NestDescriptor,
    other: Component,
    checkpoints: Sequence[int] = COPRODUCT_CHECKPOINTS,
    bounds: Optional[Bounds] = None,
) -> CoproductNestReport:
    """
    Emptiness of the designated nest in the disjoint union of two components.

    The member n of the coproduct nest is the tagged union of the members n of the
    components, so the intersection is nonempty iff some component's is. Finite
    truncations are checked against the verdict: a nonempty limit lies in every member
    up to the largest checkpoint; for an empty verdict the prefix point at every
    checkpoint is dropped by a later member.

    Args:
        component: Descriptor of the first component's nest
        other: A finite ball space (complete) or another descriptor
        checkpoints: Prefix lengths to check
        bounds: Step and prime limits

    Returns:
        CoproductNestReport
    """
    bounds = bounds or get_bounds()
    components: List[Component] = [component, other]
    verdicts = [_component_verdict(item, bounds) for item in components]
    empty = all(verdict for verdict, _ in verdicts)
    limit = None
    escapes: Dict[str, List[Optional[int]]] = {}
    if empty:
        for index, item in enumerate(components):
            escapes[str(index)] = [_escape_index(item, n, bounds) for n in checkpoints]
        consistent = all(m is not None for values in escapes.values() for m in values)
    else:
        index = next(position for position, (verdict, _) in enumerate(verdicts) if not verdict)
        limit = (index, verdicts[index][1])
        consistent = all(
            _component_contains(components[index], n, limit[1], bounds) for n in range(max(checkpoints) + 1)
        )
    logger.info("coproduct nest: empty=%s, prefix consistent=%s", empty, consistent)
    return CoproductNestReport(
        tuple(verdict for verdict, _ in verdicts),
        empty,
        limit,
        consistent,
        tuple(checkpoints),
        escapes,
    )


def example_certificate(max_i: int = 8, bounds: Optional[Bounds] = None) -> Dict[str, Any]:
    """
    The prime counterexample end to end: balls, pairwise incomparability, union
    identities and the empty intersection of the union nest.

    Args:
        max_i: Largest ball index
        bounds: Prime index limit

    Returns:
        Certificate dict; "holds" is True iff every check passed
    """
    bounds = bounds or get_bounds()
    if max_i < 2:
        raise BallSpaceError(f"the certificate needs at least two balls, got max_i={max_i}")
    balls = {str(i): build_example_ball(i, bounds) for i in range(1, max_i + 1)}
    incomparable = [
        verify_example_incomparable(i, j, bounds)
        for i in range(1, max_i + 1)
        for j in range(i + 1, max_i + 1)
    ]
    unions = {str(i): verify_example_union(i, bounds) for i in range(1, max_i + 1)}
    descriptor = prime_gap_union()
    nest = nest_intersection_empty(descriptor, bounds)
    prefixes: Dict[str, Dict[str, Any]] = {}
    running = descriptor.member(0, bounds)
    for n in range(1, max_i + 1):
        if n > 1:
            running = rset_intersect(running, descriptor.member(n - 1, bounds), bounds)
        expected = rset_open_interval(0, Fraction(1, nth_prime(n, bounds)))
        prefixes[str(n)] = {
            "set": str(running),
            "nonempty": not rset_is_empty(running),
            "matches": rset_equal(running, expected, bounds),
        }
    holds = (
        all(report.incomparable for report in incomparable)
        and all(unions.values())
        and nest.empty
        and all(entry["nonempty"] and entry["matches"] for entry in prefixes.values())
    )
    logger.info("example certificate up to %d: %s", max_i, "holds" if holds else "fails")
    return {
        "max_i": max_i,
        "balls": {index: {"text": str(ball), "set": ball.to_json()} for index, ball in balls.items()},
        "incomparable": [report.to_json() for report in incomparable],
        "unions": unions,
        "prefix_intersections": prefixes,
        "nest": nest.to_json(),
        "holds": holds,
    }
