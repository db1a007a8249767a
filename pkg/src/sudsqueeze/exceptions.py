"""Exception hierarchy shared across the package."""


class SqueezingError(Exception):
    """Base class for all package errors."""


class NonHermitianInput(SqueezingError, ValueError):
    pass


class InvalidDimension(SqueezingError, ValueError):
    pass


class NotOrthogonal(SqueezingError, ValueError):
    pass


class AlreadyExtended(SqueezingError, ValueError):
    pass


class SiteOutOfRange(SqueezingError, IndexError):
    pass


class IndexOutOfRange(SqueezingError, IndexError):
    pass


class EmptyKeepSet(SqueezingError, ValueError):
    pass


class InvalidSubset(SqueezingError, ValueError):
    pass


class TooFewSites(SqueezingError, ValueError):
    pass


class DimensionMismatch(SqueezingError, ValueError):
    pass


class LengthMismatch(SqueezingError, ValueError):
    pass


class OutOfRange(SqueezingError, ValueError):
    pass


class SingletNonexistent(SqueezingError, ValueError):
    pass


class InfeasibleGexp(SqueezingError, ValueError):
    pass


class UnsupportedInput(SqueezingError, ValueError):
    pass


class ModelBuildError(SqueezingError, ValueError):
    pass


class ParseError(SqueezingError, ValueError):
    pass


class InvariantViolation(SqueezingError, ValueError):
    """A structural invariant failed; ``quantity`` names what was checked."""

    def __init__(self, quantity, message=""):
        self.quantity = quantity
        super().__init__(f"{quantity}: {message}" if message else quantity)
