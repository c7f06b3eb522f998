"""Exception types raised across the package."""


class FewnomialError(Exception):
    """Base class for all package errors."""


class RankDeficient(FewnomialError):
    pass


class EmptyInterior(FewnomialError):
    """The kernel of the coefficient matrix has no strictly positive vector."""


class DimensionTooLarge(FewnomialError):
    pass


class Decomposable(FewnomialError):
    pass


class NotDecomposable(FewnomialError):
    pass


class NotDependencyZero(FewnomialError):
    pass


class ConditionViolated(FewnomialError):
    pass


class DomainError(FewnomialError, ValueError):
    pass


class OutOfRange(FewnomialError, ValueError):
    pass


class DegenerateExponents(FewnomialError, ValueError):
    pass


class InfiniteSolutions(FewnomialError):
    pass


class NoSolutions(FewnomialError):
    pass


class NonSquare(FewnomialError):
    pass


class Unsupported(FewnomialError):
    pass


class DegenerateToUnivariate(FewnomialError):
    """Raised by the two-trinomial standardization; carries the reduced problem."""

    def __init__(self, message, reduced=None):
        super().__init__(message)
        self.reduced = reduced


class ParseError(FewnomialError, ValueError):
    def __init__(self, message, field=None, line=None):
        loc = []
        if field is not None:
            loc.append(f"field {field!r}")
        if line is not None:
            loc.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.field = field
        self.line = line


class DimensionMismatch(ParseError):
    pass
