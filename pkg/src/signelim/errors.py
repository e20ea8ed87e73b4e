"""Exception types shared across the library."""


class SignElimError(Exception):
    """Base class for all library-specific errors."""


class DomainError(SignElimError, ValueError):
    """An argument is outside the operation's domain.

    Wrong vector length, non-canonical input where a canonical vector is
    required, an all-zero vector, an index out of range, and similar.
    """


class ValidationError(SignElimError, ValueError):
    """An input file or composite structure is malformed or inconsistent."""


class ResourceLimitError(SignElimError, RuntimeError):
    """A configured enumeration or search cap would be exceeded."""
