"""Exception hierarchy for geofill.

Every error raised by the library derives from :class:`GeofillError` so
callers can catch one base class. Data-shaped problems (bad files, bad
arguments, impossible requests) and numerical failures are kept distinct
because the CLI maps them to different exit codes.
"""

from __future__ import annotations


class GeofillError(Exception):
    """Base class for all geofill errors."""


class DataError(GeofillError):
    """Invalid input data or an impossible request derived from it."""


class NumericalError(GeofillError):
    """A numerical procedure failed (e.g. a singular linear system)."""


class EmptyInputError(DataError):
    """An operation received an empty collection where at least one element is required."""


class NonFiniteValueError(DataError):
    """A coordinate or value is NaN or infinite."""


class DuplicatePointError(DataError):
    """Two points share the same planar coordinates."""

    def __init__(self, message: str, first_line: int | None = None, duplicate_line: int | None = None):
        super().__init__(message)
        self.first_line = first_line
        self.duplicate_line = duplicate_line


class KTooLargeError(DataError):
    """A k-nearest-neighbour query asked for more neighbours than there are points."""


class NonPositiveDensityError(DataError):
    """Expected density must be strictly positive to form the density ratio."""


class MuOutOfRangeError(DataError):
    """A membership value outside [0, 1] was passed to a level schedule."""


class SingularSystemError(NumericalError):
    """The interpolation matrix is singular or numerically indistinguishable from singular."""


class FractionOutOfRangeError(DataError):
    """A hold-out fraction outside the open interval (0, 1)."""


class LengthMismatchError(DataError):
    """Paired sequences have different lengths."""


class UnknownKindError(DataError):
    """An unrecognised synthetic-surface kind."""


class ParseError(DataError):
    """A text input could not be parsed.

    ``line`` and ``column`` are 1-based positions of the offending field
    when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + location)
        self.line = line
        self.column = column


class HeaderMissingFieldError(ParseError):
    """A required grid-header field is absent."""


class CountMismatchError(ParseError):
    """A grid's declared cell count does not match the number of values present."""
