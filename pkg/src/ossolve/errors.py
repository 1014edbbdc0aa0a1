"""Exception hierarchy shared by every ossolve module."""


class OSSolveError(Exception):
    """Base class for all library errors."""


class DomainError(OSSolveError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PoleError(DomainError):
    """A function was evaluated at one of its poles."""


class ConvergenceError(OSSolveError, ArithmeticError):
    """A series or iteration exhausted its budget before meeting its stop rule."""


class PrecisionError(OSSolveError, ArithmeticError):
    """No evaluation path meets the advertised accuracy bound."""


class QuadratureError(OSSolveError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, y=None):
        super().__init__(message)
        self.y = y


class TailError(QuadratureError):
    """No finite truncation point bounds the tail of an infinite integral."""


class NoConvergence(ConvergenceError):
    """A root finder or eigen-iteration did not converge.

    ``last`` and ``residual`` carry the final iterate and its residual so the
    caller can report them.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class NoRootFound(OSSolveError, ArithmeticError):
    """A root scan found no zero in the searched region."""


class SingularMap(DomainError):
    """The collocation domain map is degenerate."""


class SpuriousMode(OSSolveError, ArithmeticError):
    """A converged eigenvector is under-resolved by the collocation grid."""

    def __init__(self, message, value=None, tail=None):
        super().__init__(message)
        self.value = value
        self.tail = tail
