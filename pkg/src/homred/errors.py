"""Exception types shared across the package."""


class HomredError(Exception):
    """Base class for all package errors."""


class InvalidArgument(HomredError, ValueError):
    pass


class BoundExceeded(HomredError):
    """A configured search or enumeration bound was hit."""

    def __init__(self, message, limit=None, partial=None):
        super().__init__(message)
        self.limit = limit
        self.partial = partial


class NotFound(HomredError):
    """A bounded search finished without a result. Not an input error."""


class NotApplicable(HomredError):
    pass


class ConstructionError(HomredError):
    """A construction failed its own postcondition. Always a bug."""


class InvariantViolation(HomredError):
    """A size or structure bound promised by a construction does not hold."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
