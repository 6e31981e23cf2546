"""Exception types raised across the package."""

from __future__ import annotations


class BLTError(Exception):
    """Base class for all errors raised by bltgroups."""


class ZeroInverse(BLTError, ZeroDivisionError):
    pass


class NonSquare(BLTError, ValueError):
    pass


class ShapeMismatch(BLTError, ValueError):
    pass


class DimMismatch(BLTError, ValueError):
    pass


class IndexOutOfRange(BLTError, IndexError):
    pass


class BadPrime(BLTError, ValueError):
    pass


class TooLarge(BLTError):
    """An exhaustive routine would exceed its work guard.

    ``cost`` is the estimated number of candidates, ``limit`` the guard.
    """

    def __init__(self, what: str, cost: int, limit: int):
        self.what = what
        self.cost = cost
        self.limit = limit
        super().__init__(f"{what}: estimated {cost} candidates exceeds guard {limit}")


class UnknownVertex(BLTError, KeyError):
    pass


class EmptySubset(BLTError, ValueError):
    pass


class NotAlternating(BLTError, ValueError):
    pass


class DomainMismatch(BLTError, ValueError):
    pass


class CompositionMismatch(BLTError, ValueError):
    pass


class NotAHomomorphism(BLTError, ValueError):
    pass


class NotPullbackHom(NotAHomomorphism):
    """Raised with the offending pair ``{i, j}`` of the source graph."""

    def __init__(self, pair, image):
        self.pair = pair
        self.image = image
        super().__init__(
            f"{{{image[0]}, {image[1]}}} is an edge of the target but "
            f"{{{pair[0]}, {pair[1]}}} is not an edge of the source"
        )


class HypothesisViolated(BLTError, ValueError):
    """A precondition of a checked statement does not hold; ``which`` names it."""

    def __init__(self, which: str, detail: str = ""):
        self.which = which
        super().__init__(f"hypothesis ({which}) violated" + (f": {detail}" if detail else ""))


class GraphsIsomorphic(BLTError, ValueError):
    pass


class ParseError(BLTError, ValueError):
    pass
