"""Exception types raised by klbody."""


class KLBodyError(Exception):
    """Base class for all library errors."""


class DegenerateConfiguration(KLBodyError):
    """The in-plane columns of a configuration are (nearly) collinear."""


class PositivityViolation(KLBodyError):
    """A deformation left the positive-definite domain.

    Raised when xi, zeta or rho is non-positive or xi*zeta - alpha**2 <= 0.
    """


class SingularMassMatrix(KLBodyError):
    """A kinetic-energy denominator vanished."""


class DegenerateDeformation(KLBodyError):
    """The two-polar chart is singular (lambda == mu)."""


class DomainError(KLBodyError, ValueError):
    """A potential was evaluated outside its domain."""


class NoConvergence(KLBodyError):
    """Newton iteration failed to reach the requested tolerance.

    The best iterate found so far is attached as ``best`` together with its
    residual norm ``residual_norm``.
    """

    def __init__(self, message, best=None, residual_norm=float("nan")):
        super().__init__(message)
        self.best = best
        self.residual_norm = residual_norm
