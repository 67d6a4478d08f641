"""
Functions between finite ball spaces: continuity, closedness, transfer conditions and quotients.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from config import Bounds, get_bounds
from errors import (
    BallNotSaturatedError,
    BallSpaceError,
    EnumerationBoundExceededError,
    NotASubfamilyError,
    NotClosedError,
    NotContinuousError,
    NotSurjectiveError,
    OutOfRangePointError,
    SpaceMismatchError,
)
from finite_core import (
    FiniteBallSpace,
    Nest,
    canonical_family,
    classify,
    full_mask,
    intersection_of,
    is_subset,
    points_of,
)

logger = logging.getLogger(__name__)


def _fibers(table: Sequence[int], target_size: int) -> Tuple[int, ...]:
    fibers = [0] * target_size
    for point, value in enumerate(table):
        fibers[value] |= 1 << point
    return tuple(fibers)


@dataclass(frozen=True)
class BallMap:
    """A total function between the point sets of two ball spaces."""
    domain: FiniteBallSpace
    codomain: FiniteBallSpace
    table: Tuple[int, ...]
    _fibers: Tuple[int, ...] = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        table = tuple(int(value) for value in self.table)
        if len(table) != self.domain.universe_size:
            raise BallSpaceError(
                f"table has {len(table)} entries for a domain of {self.domain.universe_size} points"
            )
        for value in table:
            if value < 0 or value >= self.codomain.universe_size:
                raise OutOfRangePointError(value, self.codomain.universe_size)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_fibers", _fibers(table, self.codomain.universe_size))

    def __call__(self, point: int) -> int:
        return self.table[point]

    def image(self, mask: int) -> int:
        result = 0
        for point in points_of(mask):
            result |= 1 << self.table[point]
        return result

    def preimage(self, mask: int) -> int:
        result = 0
        for point in points_of(mask):
            result |= self._fibers[point]
        return result

    def is_surjective(self) -> bool:
        return all(self._fibers)

    def to_json(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "table": list(self.table),
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "BallMap":
        try:
            domain = FiniteBallSpace.from_json(payload["domain"])
            codomain = FiniteBallSpace.from_json(payload["codomain"])
            table = tuple(int(value) for value in payload["table"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, BallSpaceError):
                raise
            raise BallSpaceError(f"map object needs 'domain', 'codomain' and integer 'table': {exc}") from exc
        return cls(domain, codomain, table)


def identity(space: FiniteBallSpace) -> BallMap:
    return BallMap(space, space, tuple(range(space.universe_size)))


def continuity_witness(f: BallMap) -> Optional[int]:
    """First codomain ball whose preimage is not a ball, or None."""
    for ball in f.codomain.balls:
        if f.preimage(ball) not in f.domain:
            return ball
    return None


def closedness_witness(f: BallMap) -> Optional[int]:
    """First domain ball whose image is not a ball, or None."""
    for ball in f.domain.balls:
        if f.image(ball) not in f.codomain:
            return ball
    return None


def is_ball_continuous(f: BallMap) -> bool:
    # An empty preimage is never a ball, so such maps are discontinuous.
    return continuity_witness(f) is None


def is_ball_closed(f: BallMap) -> bool:
    return closedness_witness(f) is None


def compose(g: BallMap, f: BallMap) -> BallMap:
    """
    The map g after f.

    Raises:
        SpaceMismatchError: If codomain(f) differs from domain(g)
    """
    if f.codomain != g.domain:
        raise SpaceMismatchError("codomain of the first map is not the domain of the second")
    return BallMap(f.domain, g.codomain, tuple(g.table[value] for value in f.table))


def phi_family(f: BallMap, family: Iterable[int]) -> Tuple[int, ...]:
    """Images of the sets in family, deduplicated."""
    return canonical_family(f.image(member) for member in family)


def psi_family(f: BallMap, family: Iterable[int]) -> Tuple[int, ...]:
    """Preimages of the sets in family, deduplicated; may contain the empty set."""
    return canonical_family(f.preimage(member) for member in family)


@dataclass(frozen=True)
class TransferReport:
    """Structural conditions under which nests and spherical completeness transfer along a map."""
    continuous: bool
    closed: bool
    surjective: bool
    finite_to_one: bool
    cond_Brl: bool
    cond_Beq: bool
    cond_Bprime_eq: bool
    poset_iso: bool
    codomain_s2: bool
    witnesses: Dict[str, int] = field(default_factory=dict, compare=False)

    def flags(self) -> Dict[str, bool]:
        return {
            "continuous": self.continuous,
            "closed": self.closed,
            "surjective": self.surjective,
            "finite_to_one": self.finite_to_one,
            "cond_Brl": self.cond_Brl,
            "cond_Beq": self.cond_Beq,
            "cond_Bprime_eq": self.cond_Bprime_eq,
            "poset_iso": self.poset_iso,
            "codomain_s2": self.codomain_s2,
        }

    def to_json(self) -> Dict[str, Any]:
        return {
            "flags": self.flags(),
            "witnesses": {name: list(points_of(mask)) for name, mask in sorted(self.witnesses.items())},
        }


def _poset_iso_witness(f: BallMap) -> Optional[int]:
    images: Dict[int, int] = {}
    for ball in f.domain.balls:
        image = f.image(ball)
        if image not in f.codomain or image in images:
            return ball
        images[image] = ball
    for target in f.codomain.balls:
        if target not in images:
            return target
    balls = f.domain.balls
    for left in balls:
        for right in balls:
            if is_subset(left, right) != is_subset(f.image(left), f.image(right)):
                return left
    return None


def transfer_report(f: BallMap, bounds: Optional[Bounds] = None) -> TransferReport:
    """
    Compute every transfer condition of a map with witnesses for the false ones.

    Args:
        f: Map between finite ball spaces
        bounds: Enumeration bounds for classifying the codomain

    Returns:
        TransferReport
    """
    witnesses: Dict[str, int] = {}
    continuous = continuity_witness(f)
    if continuous is not None:
        witnesses["continuous"] = continuous
    closed = closedness_witness(f)
    if closed is not None:
        witnesses["closed"] = closed
    missed = [point for point, fiber in enumerate(f._fibers) if not fiber]
    if missed:
        witnesses["surjective"] = 1 << missed[0]

    preimages = {f.preimage(ball) for ball in f.codomain.balls}
    images = {f.image(ball) for ball in f.domain.balls}
    not_preimage = [ball for ball in f.domain.balls if ball not in preimages]
    if not_preimage:
        witnesses["cond_Brl"] = not_preimage[0]
    cond_Beq = continuous is None and not not_preimage
    if not cond_Beq:
        witnesses["cond_Beq"] = continuous if continuous is not None else not_preimage[0]
    bprime_violation = closed
    if bprime_violation is None:
        unhit = [ball for ball in f.codomain.balls if ball not in images]
        bprime_violation = unhit[0] if unhit else None
    if bprime_violation is not None:
        witnesses["cond_Bprime_eq"] = bprime_violation
    iso = _poset_iso_witness(f)
    if iso is not None:
        witnesses["poset_iso"] = iso
    codomain = classify(f.codomain, bounds)
    if not codomain.s2:
        witnesses["codomain_s2"] = intersection_of(codomain.witnesses["s2"])

    return TransferReport(
        continuous=continuous is None,
        closed=closed is None,
        surjective=not missed,
        finite_to_one=True,
        cond_Brl=not not_preimage,
        cond_Beq=cond_Beq,
        cond_Bprime_eq=bprime_violation is None,
        poset_iso=iso is None,
        codomain_s2=codomain.s2,
        witnesses=witnesses,
    )


def _validate_table(space: FiniteBallSpace, table: Sequence[int], target_size: Optional[int]) -> Tuple[Tuple[int, ...], int]:
    values = tuple(int(value) for value in table)
    if len(values) != space.universe_size:
        raise BallSpaceError(f"table has {len(values)} entries for {space.universe_size} points")
    if any(value < 0 for value in values):
        raise OutOfRangePointError(min(values), target_size or 0)
    size = target_size if target_size is not None else max(values) + 1
    for value in values:
        if value >= size:
            raise OutOfRangePointError(value, size)
    missed = sorted(set(range(size)) - set(values))
    if missed:
        raise NotSurjectiveError(f"target point {missed[0]} has an empty fiber")
    return values, size


def quotient(space: FiniteBallSpace, table: Sequence[int], target_size: Optional[int] = None) -> FiniteBallSpace:
    """
    Quotient ball space along a surjection whose fibers saturate every ball.

    Args:
        space: Source ball space
        table: Image of each source point; targets are 0..target_size-1
        target_size: Number of target points (defaults to max(table) + 1)

    Returns:
        Ball space of the images of the balls

    Raises:
        NotSurjectiveError: If a target point has no preimage
        BallNotSaturatedError: If a ball is not a union of fibers
    """
    values, size = _validate_table(space, table, target_size)
    fibers = _fibers(values, size)
    images = []
    for ball in space.balls:
        image = 0
        for point in points_of(ball):
            image |= 1 << values[point]
        saturation = 0
        for point in points_of(image):
            saturation |= fibers[point]
        if saturation != ball:
            raise BallNotSaturatedError(ball)
        images.append(image)
    return FiniteBallSpace(size, tuple(images))


def quotient_map(space: FiniteBallSpace, table: Sequence[int], target_size: Optional[int] = None) -> BallMap:
    """The projection onto the quotient ball space as a BallMap."""
    target = quotient(space, table, target_size)
    return BallMap(space, target, tuple(table))


def check_quotient_extremality(
    space: FiniteBallSpace,
    table: Sequence[int],
    target_size: Optional[int] = None,
    bounds: Optional[Bounds] = None,
) -> Dict[str, bool]:
    """
    Check that the quotient structure is the coarsest making the projection continuous.

    Returns a dict with:
        preimage_family_equal: the source family is exactly the preimage family
        removal_breaks: dropping any source ball breaks continuity
        addition_breaks: adding any other nonempty target set breaks continuity
    """
    bounds = bounds or get_bounds()
    projection = quotient_map(space, table, target_size)
    target = projection.codomain
    if target.universe_size > bounds.max_final_points:
        raise EnumerationBoundExceededError(
            f"{target.universe_size} target points exceed the bound {bounds.max_final_points}"
        )
    preimage_family = set(psi_family(projection, target.balls))
    removal_breaks = True
    if len(space.balls) > 1:
        for ball in space.balls:
            reduced = FiniteBallSpace(space.universe_size, tuple(b for b in space.balls if b != ball))
            if is_ball_continuous(BallMap(reduced, target, projection.table)):
                removal_breaks = False
                break
    addition_breaks = True
    for extra in range(1, full_mask(target.universe_size) + 1):
        if extra in target:
            continue
        enlarged = FiniteBallSpace(target.universe_size, target.balls + (extra,))
        if is_ball_continuous(BallMap(space, enlarged, projection.table)):
            addition_breaks = False
            break
    return {
        "preimage_family_equal": preimage_family == set(space.balls),
        "removal_breaks": removal_breaks,
        "addition_breaks": addition_breaks,
    }


def _members_of(space: FiniteBallSpace, nest: Iterable[int]) -> Tuple[int, ...]:
    members = tuple(nest)
    for member in members:
        if member not in space:
            raise NotASubfamilyError(member)
    return members


def psi_nest(f: BallMap, nest: Iterable[int]) -> Nest:
    """
    Preimage of a codomain nest, which is a nest of domain balls.

    Raises:
        NotContinuousError: If f is not ball continuous
    """
    witness = continuity_witness(f)
    if witness is not None:
        raise NotContinuousError(witness)
    return Nest(tuple(f.preimage(member) for member in _members_of(f.codomain, nest)))


def phi_nest(f: BallMap, nest: Iterable[int]) -> Nest:
    """
    Image of a domain nest, which is a nest of codomain balls.

    Raises:
        NotClosedError: If f is not ball closed
    """
    witness = closedness_witness(f)
    if witness is not None:
        raise NotClosedError(witness)
    return Nest(tuple(f.image(member) for member in _members_of(f.domain, nest)))
