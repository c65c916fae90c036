"""Exception hierarchy shared by every module of the package."""


class ProbeQFIError(Exception):
    """Base class for all package errors."""


class DomainError(ProbeQFIError, ValueError):
    """An argument lies outside the domain where the model is defined."""


class UnsupportedConfigurationError(ProbeQFIError, ValueError):
    """A closed-form routine was asked about a configuration it does not cover."""


class EvaluationError(ProbeQFIError, ArithmeticError):
    """An integrand or objective produced a non-finite value."""


class ConvergenceError(ProbeQFIError, ArithmeticError):
    """Quadrature ran out of panel budget.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether it is good enough.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DegeneracyError(ProbeQFIError, ArithmeticError):
    """A Fisher-information expression is 0/0 at the requested point."""


class NoInformationError(ProbeQFIError, ValueError):
    """The probe state carries no information about the target parameter."""
