"""Exception hierarchy.

Domain errors map to CLI exit code 3, parse errors to exit code 2.
"""

from __future__ import annotations


class SignumCalcError(Exception):
    """Base class for every error raised by the package."""


class ParseError(SignumCalcError):
    """Malformed expression text. ``column`` is 1-based."""

    def __init__(self, message: str, column: int, text: str = "") -> None:
        self.column = column
        self.text = text
        super().__init__(f"{message} at column {column}")


class DomainError(SignumCalcError):
    """A well-formed request the calculus cannot answer."""


class DenominatorZero(DomainError):
    pass


class DivisionRuleMissing(DomainError):
    pass


class NonIntegrable(DomainError):
    pass


class WorldError(DomainError):
    pass


class UnsupportedForDj(DomainError):
    pass


class DimensionError(DomainError):
    pass


class Inconsistent(SignumCalcError):
    """A constraint system without solutions. Signals a rule bug, never a valid state."""


class DimensionMismatch(SignumCalcError):
    pass


class GradeError(SignumCalcError):
    pass


class OriginSingular(SignumCalcError):
    pass
