"""Exception types shared across the package."""


class PrimpowError(Exception):
    """Base class for all package errors."""


class DomainError(PrimpowError, ValueError):
    """An argument violates a mathematical precondition (e.g. k does not divide q-1)."""


class UsageError(PrimpowError, TypeError):
    """Objects combined incorrectly (e.g. elements of different fields)."""


class ResourceError(PrimpowError, RuntimeError):
    """A requested computation exceeds a configured size cap."""


class NumericConsistencyError(PrimpowError, RuntimeError):
    """A floating-point result failed an internal exactness guard.

    Raised when a quantity that must be a (real) integer comes back with a
    large imaginary part or far from the nearest integer; this signals a bug
    in the character tables rather than ordinary rounding noise.
    """
