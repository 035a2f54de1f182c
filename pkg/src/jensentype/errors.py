"""Exception types raised across the package."""


class JensenTypeError(Exception):
    """Base class for all package errors."""


class DegenerateInput(JensenTypeError, ValueError):
    pass


class UnsupportedDimension(JensenTypeError, ValueError):
    pass


class UnboundedRegion(JensenTypeError, ValueError):
    pass


class EmptyRegion(JensenTypeError, ValueError):
    pass


class NumericalFailure(JensenTypeError, RuntimeError):
    pass


class DimensionMismatch(JensenTypeError, ValueError):
    pass


class BudgetExceeded(JensenTypeError, RuntimeError):
    """Raised when no quadrature path reaches the requested accuracy."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class HypothesisViolated(JensenTypeError, ValueError):
    pass


class GenerationFailed(JensenTypeError, RuntimeError):
    pass
