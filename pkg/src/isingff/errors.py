"""Exception types shared across the package."""


class IsingffError(Exception):
    """Base class for all package errors."""


class DomainError(IsingffError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(IsingffError, ValueError):
    """Quantity diverges at the requested point (e.g. K(m) at m=1)."""


class AccuracyError(IsingffError, RuntimeError):
    """A self-check (doubling test, route comparison) failed its tolerance."""


class TruncationError(IsingffError, RuntimeError):
    """Series/matrix truncation too small for the requested accuracy."""


class BudgetError(IsingffError, ValueError):
    """Requested order exceeds the configured computational budget."""


class ExistenceError(IsingffError, RuntimeError):
    """A Toeplitz determinant in the ladder vanishes; the polynomial
    system does not exist at this index."""


class SingularDeterminantError(IsingffError, RuntimeError):
    """det(1 + lambda^2 G) vanishes; lambda is at or beyond its first zero."""


class BranchCutError(IsingffError, ValueError):
    """Evaluation point lies on a branch cut."""


class DivergenceWarning(UserWarning):
    """Emitted when approaching the critical point t -> 1."""
