"""Spectral theory of the Hilbert matrix through latent eigenfunctions and the
Mehler-Fock transform."""

__version__ = "0.1.0"

from .errors import (
    CancellationError,
    ConvergenceError,
    DomainError,
    ExistenceError,
    HilbertSpectraError,
    IntegrandEvaluationError,
    LegendreOverflowError,
    ParameterError,
    PoleError,
    TailError,
)
from .hilbert_core import (
    LatentParameter,
    PowerSeries,
    apply_hilbert_integral,
    apply_hilbert_series,
    eigenfunction_eval,
    eigenvalue,
    hill_sequence,
    latent_parameter_from_eigenvalue,
    taylor_coefficients,
)
from .mehler_fock import PhiZ, RealLineFunction, mf_forward, mf_inverse
from .report import ResidualItem, ResidualReport
from .spectral import (
    SpectralMeasure,
    multiplier_psi,
    phi_transform_poly,
    spectral_measure_density,
    spectral_weight,
    weight_w,
)
from .special_functions import conical_p, gamma, hyp2f1, legendre_p

__all__ = [name for name in dir() if not name.startswith("_")]
