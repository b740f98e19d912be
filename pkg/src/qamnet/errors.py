"""Exception hierarchy shared by all qamnet modules."""


class QamnetError(Exception):
    """Base class for all errors raised by qamnet."""


class DimensionError(QamnetError, ValueError):
    """Operands have incompatible lengths or qubit counts."""


class ValidationError(QamnetError, ValueError):
    """A value violates a documented precondition.

    ``field`` names the offending configuration field when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class CapacityError(QamnetError):
    """The requested system is too large for dense enumeration."""


class NonTerminationError(QamnetError):
    """Classical recall hit ``max_iters`` without a fixed point or cycle."""

    def __init__(self, message, trajectory):
        super().__init__(message)
        self.trajectory = trajectory
