"""Shared exception types."""


class ValidationError(ValueError):
    """An argument or configuration violates a documented contract."""


class NoModulationError(ValidationError):
    """A trace carries no detectable fringe modulation."""
