"""Exception types raised across the package.

Every error raised by shiftkrylov derives from :class:`ShiftKrylovError`,
so callers can catch one base class at an API boundary.  Conditions that
are expected outcomes of an iteration (stagnation, a shift exhausting its
budget) are reported through result objects instead of exceptions; only
conditions that invalidate the requested operation raise.
"""

__all__ = [
    "ShiftKrylovError",
    "DimensionMismatch",
    "IndexOutOfRange",
    "InvalidDimensions",
    "InvalidGrid",
    "ParseError",
    "UnsupportedFormat",
    "ZeroStartVector",
    "SingularReducedSystem",
    "AllShiftsStalled",
    "NotConverged",
    "DuplicateNodes",
    "IllConditionedEigenbasis",
]


class ShiftKrylovError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ShiftKrylovError):
    """Operands have incompatible shapes."""


class IndexOutOfRange(ShiftKrylovError):
    """A row or column index lies outside the declared matrix shape."""


class InvalidDimensions(ShiftKrylovError):
    """A matrix or vector was declared with non-positive dimensions."""


class InvalidGrid(ShiftKrylovError):
    """A grid parameter of a problem generator is out of range."""


class ParseError(ShiftKrylovError):
    """A file is malformed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UnsupportedFormat(ShiftKrylovError):
    """The file is well formed but uses a variant this package does not read."""


class ZeroStartVector(ShiftKrylovError):
    """The start vector (or right-hand side) is identically zero."""


class SingularReducedSystem(ShiftKrylovError):
    """A reduced Hessenberg system is numerically singular.

    Raised by the reduced solves when a post-rotation diagonal entry falls
    below roundoff relative to the matrix norm.  The restarted solvers
    catch this per shift and skip the affected shift for the cycle.
    """


class AllShiftsStalled(ShiftKrylovError):
    """Every active shift produced a singular reduced system for several
    consecutive cycles, so no restart can make progress."""


class NotConverged(ShiftKrylovError):
    """An inner solve did not reach its tolerance within budget.

    ``shifts`` lists the shift values that failed.
    """

    def __init__(self, message, shifts=()):
        super().__init__(message)
        self.shifts = list(shifts)


class DuplicateNodes(ShiftKrylovError):
    """A quadrature rule repeats a node, so its shifted systems coincide."""


class IllConditionedEigenbasis(ShiftKrylovError):
    """The dense reference factorization has an eigenvector basis too
    ill-conditioned to trust as an oracle."""
