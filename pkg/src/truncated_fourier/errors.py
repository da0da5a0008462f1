"""Exception hierarchy shared by all modules."""


class ProlateError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ProlateError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParityError(DomainError):
    """A parity-specific formula was called with the wrong parity."""


class PreconditionError(ProlateError, ValueError):
    """A sizing or coverage requirement of the operation is not met."""


class ConvergenceError(ProlateError, ArithmeticError):
    """The Galerkin expansion failed to converge within the basis cap."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NumericalError(ProlateError, ArithmeticError):
    """A computed quantity violates a bound it must satisfy."""


class ConsistencyError(ProlateError, AssertionError):
    """Internal cross-check failed (ordering, parity bookkeeping)."""


class NoRootError(ProlateError, ArithmeticError):
    """Root bracketing found no sign change."""
