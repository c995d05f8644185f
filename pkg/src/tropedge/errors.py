"""Shared exception types."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's contract."""


class UndefinedMetricError(ValueError):
    """Raised when a metric has no defined value for the given inputs."""
