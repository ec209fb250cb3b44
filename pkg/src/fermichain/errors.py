"""Exception types shared across the library.

Validation problems (bad parameters, out-of-domain inputs) derive from
ValueError; numerical failures (quadrature, eigensolver, fits) derive from
RuntimeError. The CLI maps the former to exit code 1 and the latter to 2.
"""


class DomainError(ValueError):
    """Input outside the documented domain of an operation."""


class DegenerateGroundStateError(ValueError):
    """A finite-chain mode energy coincides with the chemical potential."""


class SingularMatrixError(ValueError):
    """lambda hits the spectrum of the correlation matrix."""


class AccuracyError(RuntimeError):
    """A numerical routine could not reach its accuracy target."""

    def __init__(self, message, achieved=None, target=None):
        super().__init__(message)
        self.achieved = achieved
        self.target = target


class QuadratureError(AccuracyError):
    """Adaptive quadrature failed to converge; carries the achieved bound."""


class EigenConvergenceError(RuntimeError):
    """Implicit-shift iteration hit its cap before isolating an eigenvalue."""

    def __init__(self, size, cap):
        super().__init__(
            f"eigensolver did not converge for a {size}x{size} matrix "
            f"within {cap} iterations per eigenvalue")
        self.size = size
        self.cap = cap


class FitRejectedError(RuntimeError):
    """Scaling fit residual too large: grid outside the asymptotic regime."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
