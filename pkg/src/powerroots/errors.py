"""Exception hierarchy shared by every module."""


class PowerRootsError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatchError(PowerRootsError, TypeError):
    """Arithmetic was attempted between scalars of different fields."""


class DimensionError(PowerRootsError, ValueError):
    """Operand shapes are incompatible."""


class ValidationError(PowerRootsError, ValueError):
    """A group specification or query element was rejected.

    ``where`` locates the offending item (e.g. ``"generators[1]"``).
    """

    def __init__(self, message, where=None):
        self.where = where
        if where:
            message = f"{where}: {message}"
        super().__init__(message)


class CapExceededError(ValidationError):
    """Enumeration of a finite group exceeded the configured cap."""


class UnsupportedOperationError(PowerRootsError, ValueError):
    """The requested operation is undefined or undecidable in this setting."""


class PreconditionError(PowerRootsError, ValueError):
    """An operation was called outside its documented domain."""


class InvariantBreachError(PowerRootsError, RuntimeError):
    """An internal consistency check failed. Always a bug, never silent."""
