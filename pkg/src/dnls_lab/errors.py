"""Exception types raised across the package."""


class DNLSError(Exception):
    """Base class for all package errors."""


class CutoffError(DNLSError, ValueError):
    """A grid is too coarse for the requested Fourier cutoff."""


class DomainError(DNLSError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(DNLSError, ValueError):
    """An input violates an operation's precondition."""


class ResourceGuardError(DNLSError, ValueError):
    """A brute-force routine was asked for a problem size above its cap."""


class InconsistentMuError(PreconditionError):
    """The supplied mu does not match the mean of |u|^2."""


class DivergenceError(DNLSError, ArithmeticError):
    """Time integration produced non-finite coefficients.

    Attributes
    ----------
    time : float
        Simulation time at which the failure was detected.
    """

    def __init__(self, time, message=None):
        self.time = float(time)
        super().__init__(message or f"non-finite state at t={self.time:.6g}")
