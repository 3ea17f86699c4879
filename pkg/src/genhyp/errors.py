"""Exception hierarchy shared by all modules."""


class GenHypError(Exception):
    """Base class for every error raised by this package."""


class InputError(GenHypError, ValueError):
    """An argument lies outside the interval its type requires."""


class DomainError(GenHypError, ValueError):
    """A law was evaluated where no triangle of the requested type exists."""


class DegenerateError(DomainError):
    """Triangle data is (numerically) degenerate: a Gram determinant vanishes."""


class RealizabilityError(DomainError):
    """Side-angle-side data outside the realizability domain."""


class UnsupportedCaseError(GenHypError):
    """A (eps, delta) combination for which no rigidity statement is available."""


class QuadratureError(GenHypError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ParseError(GenHypError, ValueError):
    """A mesh or value file could not be parsed."""


class ValidationError(GenHypError, ValueError):
    """A complex violates one of its structural invariants."""


class SizeError(GenHypError, RuntimeError):
    """An enumeration exceeded its configured cap."""


class InfeasibleError(GenHypError):
    """The prescribed data lies outside the image of the curvature map."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConvergenceError(GenHypError, RuntimeError):
    """Newton iteration stopped without meeting the tolerance."""

    def __init__(self, message, iterations=None, residual=None, last_step=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
        self.last_step = last_step


class DomainExitError(GenHypError, RuntimeError):
    """A flow step left the admissible domain even after step halving."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state
