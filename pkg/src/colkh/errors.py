"""Exception hierarchy shared across the package."""

from __future__ import annotations


class KhovanovError(Exception):
    """Base class for every error raised by colkh."""


class DiagramError(KhovanovError, ValueError):
    """Invalid link diagram input."""


class MalformedSyntax(DiagramError):
    pass


class EdgeCountViolation(DiagramError):
    pass


class NonOrientable(DiagramError):
    pass


class InvalidLetter(DiagramError):
    pass


class UnknownName(DiagramError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return Exception.__str__(self)


class InvalidComponentIndex(DiagramError, IndexError):
    pass


class NotACable(DiagramError):
    pass


class CubeError(KhovanovError):
    pass


class BitAlreadyOne(CubeError, ValueError):
    pass


class MissingBasepoint(CubeError, ValueError):
    pass


class ResourceLimit(KhovanovError):
    """The requested computation exceeds a configured size or memory cap."""


class TooLarge(ResourceLimit):
    pass


class InconsistentComplex(KhovanovError, ArithmeticError):
    """A differential was found not to square to zero."""
