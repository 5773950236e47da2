"""Exception types shared across the package."""


class SumReconError(Exception):
    """Base class for package errors."""


class InvalidParameterError(SumReconError, ValueError):
    """An argument is outside its documented domain."""


class CapacityError(SumReconError, RuntimeError):
    """A request exceeds the enumeration limits this implementation supports."""


class ConstructionError(SumReconError, ValueError):
    """A fixed design cannot be realized, e.g. a rank-deficient parity check."""
