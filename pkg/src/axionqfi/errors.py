"""Exception hierarchy shared by all modules."""


class AxionQFIError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AxionQFIError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConfigurationError(AxionQFIError, ValueError):
    """Inconsistent configuration (dimension mismatch, unknown option, ...)."""


class StateError(AxionQFIError, ValueError):
    """A covariance matrix violates the uncertainty principle or is not positive."""


class MeasurementModelError(AxionQFIError, ValueError):
    """A readout model is degenerate (e.g. singular readout covariance)."""


class NumericalInstabilityError(AxionQFIError, ArithmeticError):
    """Finite-difference or iterative estimates failed to converge."""


class AccuracyError(AxionQFIError, ArithmeticError):
    """A quadrature or series did not reach the requested accuracy."""


class CutoffError(AxionQFIError, ArithmeticError):
    """A photon-number cutoff is too small for the requested tail bound.

    Attributes
    ----------
    suggested_n_max : int
        A cutoff that satisfies the requested bound.
    """

    def __init__(self, message, suggested_n_max=None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max


class RangeError(AxionQFIError, ValueError):
    """An optimizer found no finite maximum on the search range."""


class DivergenceError(AxionQFIError, ArithmeticError):
    """The requested quantity diverges at the given parameters."""
