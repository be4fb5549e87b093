"""Exception types shared across the package."""


class RabicritError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(RabicritError, ValueError):
    """Fock-space truncation is invalid or insufficient for the request."""


class PhaseDomainError(RabicritError, ValueError):
    """A closed-form expression was requested outside its phase of validity."""


class ConvergenceError(RabicritError, RuntimeError):
    """Cutoff doubling or an eigensolver failed to converge."""


class DimensionMismatchError(RabicritError, ValueError):
    """Operands live on incompatible Hilbert spaces."""


class LayoutError(RabicritError, ValueError):
    """A state/operator subsystem layout does not match the request."""
