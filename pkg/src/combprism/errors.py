"""Shared exception types."""


class GuardError(ValueError):
    """An enumeration size guard was exceeded (pass allow_large to override)."""


class OracleMismatchError(RuntimeError):
    """A pluggable slack oracle disagreed with the locally computed value."""
