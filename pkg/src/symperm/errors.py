"""Exception types shared across the package."""


class SympermError(Exception):
    """Base class for all symperm errors."""


class ValidationError(SympermError):
    """Input violates a documented precondition or invariant."""


class SizeLimitError(SympermError):
    """Input exceeds a size guard (factorial / 2^n / dense-memory blowup)."""
