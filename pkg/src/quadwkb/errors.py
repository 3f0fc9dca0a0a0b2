"""Exception hierarchy shared by every module in the package."""


class QuadWkbError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(QuadWkbError, ValueError):
    pass


class DomainError(QuadWkbError, ValueError):
    """Raised when a function is evaluated outside r > 0 (or x > 0)."""


class UnsupportedConfigurationError(QuadWkbError, ValueError):
    pass


class NumericalError(QuadWkbError, ArithmeticError):
    """Base class for failures of the numerical machinery itself."""


class NoBoundRegionError(NumericalError):
    """The local momentum squared is negative everywhere for the given energy."""


class BracketingError(NumericalError):
    pass


class SolverError(NumericalError):
    pass


class PhaseDivergenceError(NumericalError):
    """The phase integral diverges (unmodified centrifugal term with l = 0)."""


class QuadratureToleranceError(NumericalError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DomainTooSmallError(NumericalError):
    pass


class NumericalFailureError(NumericalError):
    pass


class UsageError(QuadWkbError, ValueError):
    """Invalid run configuration or flag combination (CLI exit code 1)."""
