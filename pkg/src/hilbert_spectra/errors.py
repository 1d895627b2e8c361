"""Exception hierarchy shared by every module of the package."""


class HilbertSpectraError(Exception):
    """Base class for all errors raised by :mod:`hilbert_spectra`."""


class DomainError(HilbertSpectraError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """A function was evaluated at one of its poles."""


class ParameterError(DomainError):
    """Invalid parameter combination (e.g. excluded hypergeometric ``c``)."""


class ConvergenceError(HilbertSpectraError, ArithmeticError):
    """An iterative method (series, quadrature) did not reach its tolerance."""


class IntegrandEvaluationError(HilbertSpectraError, ArithmeticError):
    """An integrand returned a non-finite value at an interior abscissa."""

    def __init__(self, abscissa, value):
        super().__init__(f"integrand returned {value!r} at abscissa {abscissa!r}")
        self.abscissa = abscissa
        self.value = value


class LegendreOverflowError(HilbertSpectraError, OverflowError):
    """Legendre evaluation would overflow or underflow double precision."""


class CancellationError(HilbertSpectraError, ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""


class ExistenceError(DomainError):
    """An integral transform is not guaranteed to exist for the input."""


class TailError(ConvergenceError):
    """A truncated improper integral has a tail above the requested tolerance."""
