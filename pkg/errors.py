"""
Exception hierarchy shared by all workbench modules.
"""
from typing import Any, Optional


class BallSpaceError(ValueError):
    """Base class for every validation or precondition failure."""


class EmptyFamilyError(BallSpaceError):
    """A ball space needs at least one ball."""


class EmptyBallError(BallSpaceError):
    """Balls are nonempty by definition."""


class OutOfRangePointError(BallSpaceError):
    """A point lies outside 0..n-1."""

    def __init__(self, point: int, universe_size: int):
        super().__init__(f"point {point} is outside the universe 0..{universe_size - 1}")
        self.point = point
        self.universe_size = universe_size


class NotASubfamilyError(BallSpaceError):
    """A family mentions a set that is not a ball of the space."""

    def __init__(self, member: int):
        super().__init__(f"set {member:#b} is not a ball of the space")
        self.member = member


class EnumerationBoundExceededError(BallSpaceError):
    """An exhaustive check would exceed the configured bound."""


class SizeBoundExceededError(BallSpaceError):
    """A construction would produce a universe or family above the bound."""


class UniverseMismatchError(BallSpaceError):
    """Two families live on different universes."""


class SpaceMismatchError(BallSpaceError):
    """Maps cannot be composed: codomain and domain differ."""


class NotCenteredError(BallSpaceError):
    """The family has empty intersection."""


class NotMaximalError(BallSpaceError):
    """A centered system can still be extended."""

    def __init__(self, extension: int):
        super().__init__(f"centered system extends by ball {extension:#b}")
        self.extension = extension


class NotSurjectiveError(BallSpaceError):
    """A quotient table misses a target point."""


class BallNotSaturatedError(BallSpaceError):
    """A ball is not a union of fibers of the quotient map."""

    def __init__(self, ball: int):
        super().__init__(f"ball {ball:#b} is not a union of fibers")
        self.ball = ball


class NotContinuousError(BallSpaceError):
    """Some preimage of a ball is not a ball."""

    def __init__(self, witness: Optional[int] = None):
        detail = f" (witness ball {witness:#b})" if witness is not None else ""
        super().__init__(f"map is not ball continuous{detail}")
        self.witness = witness


class NotClosedError(BallSpaceError):
    """Some image of a ball is not a ball."""

    def __init__(self, witness: Optional[int] = None):
        detail = f" (witness ball {witness:#b})" if witness is not None else ""
        super().__init__(f"map is not ball closed{detail}")
        self.witness = witness


class ConeNotContinuousError(BallSpaceError):
    """A leg of a cone or cocone is not ball continuous."""

    def __init__(self, index: int):
        super().__init__(f"leg {index} is not ball continuous")
        self.index = index


class NotConvexError(BallSpaceError):
    """A union of intervals and balls has a gap; the witness lies in it."""

    def __init__(self, witness: Any, below: Any = None, above: Any = None):
        super().__init__(f"union is not convex; {witness} lies in a gap")
        self.witness = witness
        self.below = below
        self.above = above


class UnsupportedCombinationError(BallSpaceError):
    """The symbolic set algebra cannot decide this combination."""


class SpaceFileError(BallSpaceError):
    """A JSON input file could not be read or validated."""

    def __init__(self, path: str, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = path if line is None else f"{path}:{line}:{column}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.column = column
