"""
Products, coproducts, augmented ball spaces and initial/final structures,
with exhaustive checks of the universal properties on small instances.

Product points are flattened by little-endian mixed radix: the tuple
(y_0, ..., y_k) is y_0 + |Y_0| * (y_1 + |Y_1| * (...)). Coproduct points are
flattened by offset: point y of component i is sum(|Y_j| for j < i) + y.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from config import Bounds, get_bounds
from errors import (
    BallSpaceError,
    ConeNotContinuousError,
    EnumerationBoundExceededError,
    OutOfRangePointError,
    SizeBoundExceededError,
    SpaceMismatchError,
)
from finite_core import (
    FiniteBallSpace,
    canonical_family,
    full_mask,
    is_subset,
    mask_of,
    points_of,
)
from maps import BallMap, compose, continuity_witness, is_ball_continuous

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AugmentedBallSpace:
    """A family of subsets that contains the empty set and the whole universe."""
    universe_size: int
    family: Tuple[int, ...]
    _family_set: FrozenSet[int] = field(init=False, repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        if self.universe_size < 0:
            raise BallSpaceError(f"universe size must be nonnegative, got {self.universe_size}")
        family = canonical_family(int(member) for member in self.family)
        full = full_mask(self.universe_size)
        for member in family:
            if member < 0 or not is_subset(member, full):
                raise OutOfRangePointError(points_of(member & ~full)[0], self.universe_size)
        if 0 not in family or full not in family:
            raise BallSpaceError("an augmented family must contain the empty set and the universe")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "_family_set", frozenset(family))

    @property
    def full(self) -> int:
        return full_mask(self.universe_size)

    @property
    def family_set(self) -> FrozenSet[int]:
        return self._family_set

    def __contains__(self, mask: object) -> bool:
        return mask in self._family_set

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.universe_size,
            "balls": [list(points_of(member)) for member in self.family],
            "augmented": True,
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "AugmentedBallSpace":
        try:
            universe_size = int(payload["n"])
            members = [mask_of(points, universe_size) for points in payload["balls"]]
        except (KeyError, TypeError) as exc:
            raise BallSpaceError(f"augmented space object needs 'n' and 'balls': {exc}") from exc
        return cls(universe_size, tuple(members))


@dataclass(frozen=True, order=True)
class TaggedPoint:
    """A point of one component of a disjoint union."""
    component_index: int
    point: int


@dataclass(frozen=True)
class UniversalPropertyReport:
    holds: bool
    checked: int = 0
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.holds != (self.counterexample is None):
            raise BallSpaceError("a report holds exactly when it has no counterexample")

    def to_json(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


Space = Union[FiniteBallSpace, AugmentedBallSpace]


def _members(space: Space) -> Tuple[int, ...]:
    return space.balls if isinstance(space, FiniteBallSpace) else space.family


def empty_space() -> AugmentedBallSpace:
    return AugmentedBallSpace(0, (0,))


def augment(space: Space) -> AugmentedBallSpace:
    """Add the empty set and the universe; augmented inputs come back unchanged."""
    if isinstance(space, AugmentedBallSpace):
        return space
    return AugmentedBallSpace(space.universe_size, space.balls + (0, space.full))


# Point encodings

def product_size(sizes: Sequence[int]) -> int:
    return math.prod(sizes)


def encode_product_point(sizes: Sequence[int], coords: Sequence[int]) -> int:
    if len(coords) != len(sizes):
        raise BallSpaceError(f"expected {len(sizes)} coordinates, got {len(coords)}")
    index = 0
    scale = 1
    for size, coord in zip(sizes, coords):
        if coord < 0 or coord >= size:
            raise OutOfRangePointError(coord, size)
        index += coord * scale
        scale *= size
    return index


def decode_product_point(sizes: Sequence[int], index: int) -> Tuple[int, ...]:
    coords = []
    for size in sizes:
        coords.append(index % size)
        index //= size
    return tuple(coords)


def _offsets(sizes: Sequence[int]) -> Tuple[int, ...]:
    return tuple(itertools.accumulate([0] + list(sizes[:-1])))


def encode_tagged(sizes: Sequence[int], tagged: TaggedPoint) -> int:
    if tagged.component_index < 0 or tagged.component_index >= len(sizes):
        raise BallSpaceError(f"component index {tagged.component_index} out of range")
    if tagged.point < 0 or tagged.point >= sizes[tagged.component_index]:
        raise OutOfRangePointError(tagged.point, sizes[tagged.component_index])
    return _offsets(sizes)[tagged.component_index] + tagged.point


def decode_tagged(sizes: Sequence[int], index: int) -> TaggedPoint:
    for component, (offset, size) in enumerate(zip(_offsets(sizes), sizes)):
        if offset <= index < offset + size:
            return TaggedPoint(component, index - offset)
    raise OutOfRangePointError(index, sum(sizes))


def _cylinders(sizes: Sequence[int]) -> List[List[int]]:
    """cylinders[k][y] is the set of product points whose k-th coordinate is y."""
    cylinders = [[0] * size for size in sizes]
    for index in range(product_size(sizes)):
        for k, coord in enumerate(decode_product_point(sizes, index)):
            cylinders[k][coord] |= 1 << index
    return cylinders


def _cylinder_over(cylinders: List[List[int]], k: int, mask: int) -> int:
    result = 0
    for point in points_of(mask):
        result |= cylinders[k][point]
    return result


def _check_factors(spaces: Sequence[Space], bounds: Bounds) -> Tuple[int, ...]:
    if not spaces:
        raise BallSpaceError("the index set must be nonempty")
    sizes = tuple(space.universe_size for space in spaces)
    if product_size(sizes) > bounds.max_product_points:
        raise SizeBoundExceededError(
            f"product of sizes {sizes} exceeds the bound {bounds.max_product_points}"
        )
    return sizes


def _product_family(spaces: Sequence[Space], bounds: Bounds) -> Tuple[int, Tuple[int, ...]]:
    sizes = _check_factors(spaces, bounds)
    cylinders = _cylinders(sizes)
    family = set()
    for k, space in enumerate(spaces):
        for member in _members(space):
            family.add(_cylinder_over(cylinders, k, member))
    return product_size(sizes), tuple(family)


def _coproduct_family(spaces: Sequence[Space], bounds: Bounds) -> Tuple[int, Tuple[int, ...]]:
    if not spaces:
        raise BallSpaceError("the index set must be nonempty")
    sizes = tuple(space.universe_size for space in spaces)
    if sum(sizes) > bounds.max_product_points:
        raise SizeBoundExceededError(f"disjoint union of sizes {sizes} exceeds the bound")
    choices = math.prod(len(_members(space)) for space in spaces)
    if choices > bounds.max_family_choices:
        raise SizeBoundExceededError(
            f"{choices} member choices exceed the bound {bounds.max_family_choices}"
        )
    offsets = _offsets(sizes)
    family = set()
    for choice in itertools.product(*(_members(space) for space in spaces)):
        family.add(sum(member << offset for member, offset in zip(choice, offsets)))
    return sum(sizes), tuple(family)


def product(spaces: Sequence[FiniteBallSpace], bounds: Optional[Bounds] = None) -> FiniteBallSpace:
    """
    Product ball space: a ball is a cylinder over a ball of one factor.

    Args:
        spaces: Nonempty list of factors
        bounds: Size bounds

    Returns:
        FiniteBallSpace on the mixed-radix encoded product

    Raises:
        SizeBoundExceededError: If the product has too many points
    """
    size, family = _product_family(spaces, bounds or get_bounds())
    return FiniteBallSpace(size, family)


def coproduct(spaces: Sequence[FiniteBallSpace], bounds: Optional[Bounds] = None) -> FiniteBallSpace:
    """
    Coproduct ball space: a ball is a union of one ball from every component.

    Raises:
        SizeBoundExceededError: If the number of choices or points is too large
    """
    size, family = _coproduct_family(spaces, bounds or get_bounds())
    return FiniteBallSpace(size, family)


def augmented_product(spaces: Sequence[AugmentedBallSpace], bounds: Optional[Bounds] = None) -> AugmentedBallSpace:
    """The product formula applied to augmented factors; contains the empty set and the universe."""
    size, family = _product_family([augment(space) for space in spaces], bounds or get_bounds())
    return AugmentedBallSpace(size, family)


def augmented_coproduct(spaces: Sequence[AugmentedBallSpace], bounds: Optional[Bounds] = None) -> AugmentedBallSpace:
    """The coproduct formula applied to augmented components."""
    size, family = _coproduct_family([augment(space) for space in spaces], bounds or get_bounds())
    return AugmentedBallSpace(size, family)


def naive_coproduct(spaces: Sequence[AugmentedBallSpace], bounds: Optional[Bounds] = None) -> AugmentedBallSpace:
    """
    The smaller family of embedded members plus the empty set and the universe.

    Every embedding is continuous for it, but it is not a coproduct in general.
    """
    spaces = [augment(space) for space in spaces]
    if not spaces:
        raise BallSpaceError("the index set must be nonempty")
    sizes = tuple(space.universe_size for space in spaces)
    if sum(sizes) > (bounds or get_bounds()).max_product_points:
        raise SizeBoundExceededError(f"disjoint union of sizes {sizes} exceeds the bound")
    offsets = _offsets(sizes)
    family = {0, full_mask(sum(sizes))}
    for space, offset in zip(spaces, offsets):
        family.update(member << offset for member in space.family)
    return AugmentedBallSpace(sum(sizes), tuple(family))


def projection(spaces: Sequence[FiniteBallSpace], k: int, bounds: Optional[Bounds] = None) -> BallMap:
    target = product(spaces, bounds)
    sizes = [space.universe_size for space in spaces]
    table = tuple(decode_product_point(sizes, index)[k] for index in range(target.universe_size))
    return BallMap(target, spaces[k], table)


def injection(spaces: Sequence[FiniteBallSpace], k: int, bounds: Optional[Bounds] = None) -> BallMap:
    target = coproduct(spaces, bounds)
    offset = _offsets([space.universe_size for space in spaces])[k]
    return BallMap(spaces[k], target, tuple(offset + point for point in range(spaces[k].universe_size)))


# Mediating morphisms

def _check_cone(cone: Sequence[BallMap]) -> None:
    if not cone:
        raise BallSpaceError("a cone needs at least one leg")
    for index, leg in enumerate(cone):
        if leg.domain != cone[0].domain:
            raise SpaceMismatchError("cone legs must share their domain")
        if not is_ball_continuous(leg):
            raise ConeNotContinuousError(index)


def _check_cocone(cocone: Sequence[BallMap]) -> None:
    if not cocone:
        raise BallSpaceError("a cocone needs at least one leg")
    for index, leg in enumerate(cocone):
        if leg.codomain != cocone[0].codomain:
            raise SpaceMismatchError("cocone legs must share their codomain")
        if not is_ball_continuous(leg):
            raise ConeNotContinuousError(index)


def _product_mediator_report(cone: Sequence[BallMap], target: FiniteBallSpace) -> Tuple[Optional[BallMap], Optional[str]]:
    factors = [leg.codomain for leg in cone]
    sizes = [space.universe_size for space in factors]
    points = [decode_product_point(sizes, index) for index in range(target.universe_size)]
    table = []
    for z in range(cone[0].domain.universe_size):
        forced = tuple(leg(z) for leg in cone)
        candidates = [index for index, coords in enumerate(points) if coords == forced]
        if len(candidates) != 1:
            return None, f"point {z} has {len(candidates)} mediator values"
        table.append(candidates[0])
    mediator = BallMap(cone[0].domain, target, tuple(table))
    witness = continuity_witness(mediator)
    if witness is not None:
        return None, f"mediator is not continuous at ball {list(points_of(witness))}"
    return mediator, None


def mediate_product(cone: Sequence[BallMap], bounds: Optional[Bounds] = None) -> BallMap:
    """
    The unique continuous map into the product commuting with every projection.

    Args:
        cone: Continuous maps f_i: Z -> Y_i sharing the domain Z

    Returns:
        BallMap g: Z -> product of the Y_i

    Raises:
        ConeNotContinuousError: If some leg is not ball continuous
    """
    _check_cone(cone)
    target = product([leg.codomain for leg in cone], bounds)
    mediator, problem = _product_mediator_report(cone, target)
    if mediator is None:
        raise BallSpaceError(problem)
    factors = [leg.codomain for leg in cone]
    for k, leg in enumerate(cone):
        if compose(projection(factors, k, bounds), mediator) != leg:
            raise BallSpaceError(f"mediator does not commute with projection {k}")
    return mediator


def _coproduct_mediator_report(cocone: Sequence[BallMap], target: Space) -> Tuple[Optional[Tuple[int, ...]], Optional[str]]:
    sizes = [leg.domain.universe_size for leg in cocone]
    codomain = cocone[0].codomain
    # Commuting with the injections forces one value per point.
    table = []
    for index in range(sum(sizes)):
        tagged = decode_tagged(sizes, index)
        table.append(cocone[tagged.component_index](tagged.point))
    members = target.family_set if isinstance(target, AugmentedBallSpace) else target.ball_set
    for ball in codomain.balls:
        preimage = mask_of(index for index, value in enumerate(table) if ball >> value & 1)
        if preimage not in members:
            return None, f"mediator preimage {list(points_of(preimage))} of ball {list(points_of(ball))} is missing"
    return tuple(table), None


def mediate_coproduct(cocone: Sequence[BallMap], bounds: Optional[Bounds] = None) -> BallMap:
    """
    The unique continuous map out of the coproduct commuting with every injection.

    Its preimages are the disjoint unions of the leg preimages.

    Raises:
        ConeNotContinuousError: If some leg is not ball continuous
    """
    _check_cocone(cocone)
    components = [leg.domain for leg in cocone]
    source = coproduct(components, bounds)
    table, problem = _coproduct_mediator_report(cocone, source)
    if table is None:
        raise BallSpaceError(problem)
    mediator = BallMap(source, cocone[0].codomain, table)
    for k, leg in enumerate(cocone):
        if compose(mediator, injection(components, k, bounds)) != leg:
            raise BallSpaceError(f"mediator does not commute with injection {k}")
    return mediator


# Exhaustive enumeration

def all_spaces(universe_size: int, max_balls: int) -> Iterator[FiniteBallSpace]:
    """Every ball space on n points with at most max_balls balls."""
    subsets = range(1, full_mask(universe_size) + 1)
    for count in range(1, max_balls + 1):
        for family in itertools.combinations(subsets, count):
            yield FiniteBallSpace(universe_size, family)


def all_augmented_structures(universe_size: int) -> List[AugmentedBallSpace]:
    """Every augmented structure on n points; exactly one when n <= 1."""
    full = full_mask(universe_size)
    middle = list(range(1, full))
    structures = []
    for count in range(len(middle) + 1):
        for chosen in itertools.combinations(middle, count):
            structures.append(AugmentedBallSpace(universe_size, chosen + (0, full)))
    return structures


def _preimage(table: Sequence[int], mask: int) -> int:
    result = 0
    for point, value in enumerate(table):
        if mask >> value & 1:
            result |= 1 << point
    return result


def is_augmented_continuous(table: Sequence[int], source: AugmentedBallSpace, target: AugmentedBallSpace) -> bool:
    """Preimage of every member of the target family is in the source family."""
    return all(_preimage(table, member) in source for member in target.family)


def _tables(source_size: int, target_size: int, bounds: Bounds) -> Iterator[Tuple[int, ...]]:
    if source_size > bounds.max_morphism_domain:
        raise EnumerationBoundExceededError(
            f"{source_size} source points exceed the morphism bound {bounds.max_morphism_domain}"
        )
    return itertools.product(range(target_size), repeat=source_size)


def continuous_maps(source: FiniteBallSpace, target: FiniteBallSpace, bounds: Optional[Bounds] = None) -> List[BallMap]:
    """All ball continuous maps between two small spaces."""
    bounds = bounds or get_bounds()
    maps = []
    for table in _tables(source.universe_size, target.universe_size, bounds):
        candidate = BallMap(source, target, table)
        if is_ball_continuous(candidate):
            maps.append(candidate)
    return maps


def check_product_universal_property(
    factors: Sequence[FiniteBallSpace],
    test_object: FiniteBallSpace,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """
    Existence and uniqueness of the mediator for every continuous cone from test_object.
    """
    bounds = bounds or get_bounds()
    target = product(factors, bounds)
    for k in range(len(factors)):
        if not is_ball_continuous(projection(factors, k, bounds)):
            return UniversalPropertyReport(False, 0, {"projection": k, "reason": "projection is not continuous"})
    legs = [continuous_maps(test_object, factor, bounds) for factor in factors]
    checked = 0
    for cone in itertools.product(*legs):
        checked += 1
        mediator, problem = _product_mediator_report(cone, target)
        if mediator is None:
            return UniversalPropertyReport(
                False, checked, {"cone": [list(leg.table) for leg in cone], "reason": problem}
            )
    return UniversalPropertyReport(True, checked)


def check_coproduct_universal_property(
    components: Sequence[FiniteBallSpace],
    test_object: FiniteBallSpace,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """Existence and uniqueness of the mediator for every continuous cocone into test_object."""
    bounds = bounds or get_bounds()
    source = coproduct(components, bounds)
    for k in range(len(components)):
        if not is_ball_continuous(injection(components, k, bounds)):
            return UniversalPropertyReport(False, 0, {"injection": k, "reason": "injection is not continuous"})
    legs = [continuous_maps(component, test_object, bounds) for component in components]
    checked = 0
    for cocone in itertools.product(*legs):
        checked += 1
        table, problem = _coproduct_mediator_report(cocone, source)
        if table is None:
            return UniversalPropertyReport(
                False, checked, {"cocone": [list(leg.table) for leg in cocone], "reason": problem}
            )
    return UniversalPropertyReport(True, checked)


def check_augmented_coproduct(
    components: Sequence[AugmentedBallSpace],
    candidate: AugmentedBallSpace,
    test_object: AugmentedBallSpace,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """
    Test a candidate structure on the disjoint union against every continuous cocone into test_object.
    """
    bounds = bounds or get_bounds()
    components = [augment(component) for component in components]
    sizes = [component.universe_size for component in components]
    offsets = _offsets(sizes)
    if candidate.universe_size != sum(sizes):
        raise SpaceMismatchError("candidate structure does not live on the disjoint union")
    for k, (component, offset) in enumerate(zip(components, offsets)):
        embedding = tuple(offset + point for point in range(component.universe_size))
        if not is_augmented_continuous(embedding, component, candidate):
            return UniversalPropertyReport(False, 0, {"injection": k, "reason": "injection is not continuous"})
    legs = [
        [
            table for table in _tables(component.universe_size, test_object.universe_size, bounds)
            if is_augmented_continuous(table, component, test_object)
        ]
        for component in components
    ]
    checked = 0
    for cocone in itertools.product(*legs):
        checked += 1
        mediator = tuple(value for leg in cocone for value in leg)
        if not is_augmented_continuous(mediator, candidate, test_object):
            missing = next(
                _preimage(mediator, member) for member in test_object.family
                if _preimage(mediator, member) not in candidate
            )
            return UniversalPropertyReport(
                False,
                checked,
                {
                    "cocone": [list(leg) for leg in cocone],
                    "mediator": list(mediator),
                    "missing_preimage": list(points_of(missing)),
                },
            )
    return UniversalPropertyReport(True, checked)


def sweep_universal_properties(
    max_size: int = 2,
    max_balls: int = 2,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """
    Check both universal properties for every pair of factors and every test object
    with at most max_size points and max_balls balls.
    """
    bounds = bounds or get_bounds()
    spaces = [space for n in range(1, max_size + 1) for space in all_spaces(n, max_balls)]
    checked = 0
    for first, second in itertools.product(spaces, repeat=2):
        for test_object in spaces:
            for check in (check_product_universal_property, check_coproduct_universal_property):
                report = check([first, second], test_object, bounds)
                checked += report.checked
                if not report.holds:
                    counterexample = dict(report.counterexample or {})
                    counterexample.update(
                        check=check.__name__,
                        factors=[first.to_json(), second.to_json()],
                        test_object=test_object.to_json(),
                    )
                    return UniversalPropertyReport(False, checked, counterexample)
    logger.info("universal property sweep: %d spaces, %d cones and cocones", len(spaces), checked)
    return UniversalPropertyReport(True, checked, details={"spaces": len(spaces)})


# Initial and final structures

Arrow = Tuple[Sequence[int], AugmentedBallSpace]


def _validate_arrow(table: Sequence[int], source_size: int, target_size: int) -> Tuple[int, ...]:
    values = tuple(int(value) for value in table)
    if len(values) != source_size:
        raise BallSpaceError(f"table has {len(values)} entries for {source_size} points")
    for value in values:
        if value < 0 or value >= target_size:
            raise OutOfRangePointError(value, target_size)
    return values


def initial_structure(universe_size: int, sinks: Sequence[Arrow]) -> AugmentedBallSpace:
    """
    Coarsest structure on X making every sink map continuous: all preimages of target members.

    Args:
        universe_size: Number of points of X
        sinks: Pairs (table of f_i: X -> Y_i, structure on Y_i)

    Returns:
        AugmentedBallSpace on X
    """
    family = {0, full_mask(universe_size)}
    for table, target in sinks:
        values = _validate_arrow(table, universe_size, target.universe_size)
        family.update(_preimage(values, member) for member in target.family)
    return AugmentedBallSpace(universe_size, tuple(family))


def final_structure(universe_size: int, sources: Sequence[Arrow], bounds: Optional[Bounds] = None) -> AugmentedBallSpace:
    """
    Finest structure on X making every source map continuous.

    Raises:
        SizeBoundExceededError: If the powerset scan of X is too large
    """
    bounds = bounds or get_bounds()
    if universe_size > bounds.max_final_points:
        raise SizeBoundExceededError(
            f"{universe_size} points exceed the final structure bound {bounds.max_final_points}"
        )
    arrows = [
        (_validate_arrow(table, source.universe_size, universe_size), source)
        for table, source in sources
    ]
    family = [
        candidate for candidate in range(full_mask(universe_size) + 1)
        if all(_preimage(table, candidate) in source for table, source in arrows)
    ]
    return AugmentedBallSpace(universe_size, tuple(family))


def _structures_up_to(max_size: int) -> List[AugmentedBallSpace]:
    return [structure for n in range(max_size + 1) for structure in all_augmented_structures(n)]


def check_initial_characterization(
    universe_size: int,
    sinks: Sequence[Arrow],
    max_test_size: int = 2,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """g: Z -> X is continuous into the initial structure iff every f_i after g is continuous."""
    bounds = bounds or get_bounds()
    initial = initial_structure(universe_size, sinks)
    arrows = [(_validate_arrow(table, universe_size, target.universe_size), target) for table, target in sinks]
    checked = 0
    for test_object in _structures_up_to(max_test_size):
        for g in _tables(test_object.universe_size, universe_size, bounds):
            checked += 1
            direct = is_augmented_continuous(g, test_object, initial)
            through = all(
                is_augmented_continuous(tuple(table[value] for value in g), test_object, target)
                for table, target in arrows
            )
            if direct != through:
                return UniversalPropertyReport(
                    False, checked, {"test_object": test_object.to_json(), "g": list(g)}
                )
    return UniversalPropertyReport(True, checked)


def check_final_characterization(
    universe_size: int,
    sources: Sequence[Arrow],
    max_test_size: int = 2,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """g: X -> Z is continuous out of the final structure iff every g after f_i is continuous."""
    bounds = bounds or get_bounds()
    final = final_structure(universe_size, sources, bounds)
    arrows = [(_validate_arrow(table, source.universe_size, universe_size), source) for table, source in sources]
    checked = 0
    for test_object in _structures_up_to(max_test_size):
        for g in _tables(universe_size, test_object.universe_size, bounds):
            checked += 1
            direct = is_augmented_continuous(g, final, test_object)
            through = all(
                is_augmented_continuous(tuple(g[value] for value in table), source, test_object)
                for table, source in arrows
            )
            if direct != through:
                return UniversalPropertyReport(
                    False, checked, {"test_object": test_object.to_json(), "g": list(g)}
                )
    return UniversalPropertyReport(True, checked)


def _all_sinks(universe_size: int, max_codomain: int, bounds: Bounds) -> List[Arrow]:
    sinks: List[Arrow] = []
    for size in range(max_codomain + 1):
        structures = all_augmented_structures(size)
        for table in _tables(universe_size, size, bounds):
            sinks.extend((table, structure) for structure in structures)
    return sinks


def verify_topologicity(
    max_size: int = 2,
    max_codomain: int = 2,
    max_sinks: int = 2,
    bounds: Optional[Bounds] = None,
) -> UniversalPropertyReport:
    """
    Check the axioms of a topological category on small sets.

    - every sink family has an initial structure satisfying the characterization,
      and no other structure on X satisfies it;
    - structures on a set form a set (reported as counts per size);
    - sets with at most one point carry exactly one structure.
    """
    bounds = bounds or get_bounds()
    fibre_counts = {n: len(all_augmented_structures(n)) for n in range(max_size + 1)}
    for n in (0, 1):
        if len(all_augmented_structures(n)) != 1:
            return UniversalPropertyReport(
                False, 0, {"axiom": "unique structure on small sets", "size": n}
            )
    checked = 0
    for n in range(max_size + 1):
        candidates = all_augmented_structures(n)
        identity_table = tuple(range(n))
        single_sinks = _all_sinks(n, max_codomain, bounds)
        for count in range(1, max_sinks + 1):
            for sinks in itertools.combinations_with_replacement(range(len(single_sinks)), count):
                family = [single_sinks[index] for index in sinks]
                checked += 1
                report = check_initial_characterization(n, family, max_size, bounds)
                if not report.holds:
                    return UniversalPropertyReport(
                        False, checked,
                        {"axiom": "initial lift", "size": n, "sinks": _arrows_to_json(family),
                         "detail": report.counterexample},
                    )
                initial = initial_structure(n, family)
                through = [
                    all(is_augmented_continuous(table, test_object, target) for table, target in family)
                    for test_object in candidates
                ]
                matching = [
                    structure for structure in candidates
                    if all(
                        is_augmented_continuous(identity_table, test_object, structure) == lifts
                        for test_object, lifts in zip(candidates, through)
                    )
                ]
                if matching != [initial]:
                    return UniversalPropertyReport(
                        False, checked,
                        {"axiom": "unique initial lift", "size": n, "sinks": _arrows_to_json(family),
                         "matching": [structure.to_json() for structure in matching]},
                    )
    logger.info("topologicity: %d sink families checked", checked)
    return UniversalPropertyReport(True, checked, details={"fibre_counts": fibre_counts})


def _arrows_to_json(arrows: Sequence[Arrow]) -> List[Dict[str, Any]]:
    return [{"table": list(table), "structure": structure.to_json()} for table, structure in arrows]


def intersection_commutation_check(spaces: Sequence[FiniteBallSpace], nests: Sequence[Sequence[int]]) -> bool:
    """
    Check that intersecting the products (and the disjoint unions) of the j-th members
    equals the product (and the disjoint union) of the componentwise intersections.

    Args:
        spaces: Factors
        nests: nests[i] lists the members B_{i,j} of factor i; all of equal length

    Returns:
        True iff both identities hold
    """
    if len(spaces) != len(nests) or not spaces:
        raise BallSpaceError("need one nest per factor")
    lengths = {len(nest) for nest in nests}
    if len(lengths) != 1 or 0 in lengths:
        raise BallSpaceError("nests must be nonempty and of equal length")
    sizes = [space.universe_size for space in spaces]
    cylinders = _cylinders(sizes)
    offsets = _offsets(sizes)
    rows = list(zip(*nests))

    def box(row: Sequence[int]) -> int:
        result = full_mask(product_size(sizes))
        for k, member in enumerate(row):
            result &= _cylinder_over(cylinders, k, member)
        return result

    def disjoint_union(row: Sequence[int]) -> int:
        return sum(member << offset for member, offset in zip(row, offsets))

    def meet(masks: Iterable[int], start: int) -> int:
        result = start
        for mask in masks:
            result &= mask
        return result

    componentwise = [meet(nest, full_mask(size)) for nest, size in zip(nests, sizes)]
    product_ok = meet((box(row) for row in rows), full_mask(product_size(sizes))) == box(componentwise)
    coproduct_ok = meet((disjoint_union(row) for row in rows), full_mask(sum(sizes))) == disjoint_union(componentwise)
    return product_ok and coproduct_ok
