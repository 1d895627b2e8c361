"""Spectral picture of the Hilbert matrix on the critical line ``mu = 1/2 + it``.

The transform ``Phi`` pairs a polynomial ``f = sum a_n z**n`` with the Taylor
coefficients ``c_n(t)`` of ``f_{1/2+it}``::

    Phi f (t) = sum_n a_n c_n(t),

and conjugates ``H`` to multiplication by ``psi(t) = pi / cosh(pi t)``.  The
spectral measure of ``H`` at the vector ``1`` is ``dr = density(x) dx`` on
``[0, pi]`` with ``density(x) = (2/pi**2) arccosh(pi/x)``.

Two weights on ``t >= 0`` are provided:

* :func:`weight_w`, ``2 pi tanh(pi t)/sinh(pi t) = 2 pi sech(pi t)``;
* :func:`spectral_weight`, ``2 pi t tanh(pi t) sech(pi t)``, the image of
  ``dr`` under ``x = psi(t)``.  With it the ``c_n`` are orthonormal.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .hilbert_core import (
    PowerSeries,
    apply_hilbert_series,
    eigenfunction_eval,
    latent_parameter_from_eigenvalue,
    taylor_coefficients,
)
from .quadrature import integrate_from_zero, integrate_unit
from .report import ResidualReport

__all__ = [
    "MultiplierConvergence",
    "SpectralMeasure",
    "SpectralProfile",
    "coefficient_table",
    "fit_convergence_slope",
    "gelfand_map_eval",
    "gelfand_norm_ratio",
    "multiplier_convergence",
    "multiplier_identity_residual",
    "multiplier_psi",
    "orthogonality_integral",
    "orthogonality_residual",
    "phi_of_hilbert_image",
    "phi_transform_poly",
    "pushforward_moment",
    "spectral_measure_density",
    "spectral_weight",
    "spectrum_report",
    "weight_w",
]

ORTHOGONALITY_T_MAX = 60.0
_TWO_PI = 2.0 * math.pi


def _check_t(t: float) -> float:
    t = float(t)
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    return t


def _sech(x: float) -> float:
    x = abs(x)
    e = math.exp(-x)
    return 2.0 * e / (1.0 + e * e)


def multiplier_psi(t: float) -> float:
    """``pi / cosh(pi t)``: equals ``pi`` at 0 and decreases strictly to 0."""
    return math.pi * _sech(math.pi * _check_t(t))


def weight_w(t: float) -> float:
    """``2 pi tanh(pi t) / sinh(pi t)``, with the limit ``2 pi`` at ``t = 0``.

    Since ``tanh/sinh = sech`` this is evaluated as ``2 pi sech(pi t)``,
    which never overflows.
    """
    return _TWO_PI * _sech(math.pi * _check_t(t))


def spectral_weight(t: float) -> float:
    """``2 pi t tanh(pi t) sech(pi t)``, the density of ``dr`` in the ``t`` variable.

    ``int_0^inf g(psi(t)) spectral_weight(t) dt = int_0^pi g(x) dr(x)``.
    """
    t = _check_t(t)
    return _TWO_PI * t * math.tanh(math.pi * t) * _sech(math.pi * t)


def coefficient_table(t: float, n_max: int) -> np.ndarray:
    """Real Taylor coefficients ``c_0(t) .. c_{n_max}(t)`` of ``f_{1/2+it}``."""
    t = _check_t(t)
    return taylor_coefficients(complex(0.5, t), n_max).real.copy()


def _as_series(a) -> PowerSeries:
    return a if isinstance(a, PowerSeries) else PowerSeries(a)


def phi_transform_poly(a, t: float) -> complex:
    """``Phi f (t) = sum_n a_n c_n(t)`` for a polynomial ``f``.

    Examples
    --------
    >>> phi_transform_poly(PowerSeries([1.0]), 0.7)
    (1+0j)
    """
    a = _as_series(a)
    c = coefficient_table(t, a.truncation_order)
    return complex(np.dot(a.coeffs, c))


def phi_of_hilbert_image(a, t: float, truncation: Optional[int] = 10**4, *,
                         tol: float = 1e-12) -> complex:
    """``Phi(H f)(t)`` for a polynomial ``f``.

    With an integer ``truncation`` N the image ``H f`` is formed by
    :func:`apply_hilbert_series` and paired with ``c_0 .. c_{N-1}``; the
    neglected tail is ``O(N**-1/2)`` because the ``c_n`` are not square
    summable.  With ``truncation=None`` the pairing is summed in closed form,
    ``sum_m a_m int_0^1 s**m f_{1/2+it}(s) ds``, by quadrature.
    """
    a = _as_series(a)
    t = _check_t(t)
    if truncation is None:
        mu = complex(0.5, t)
        total = 0j
        for m, am in enumerate(a.coeffs):
            if am == 0:
                continue
            integrand = (lambda s, oms, m=m:
                         s ** m * eigenfunction_eval(mu, s, one_minus_z=oms))
            res = integrate_unit(integrand, abs_tol=tol, rel_tol=tol, with_aux=True)
            total += am * res.raise_if_unconverged("Phi(Hf) pairing").value
        return total
    n = int(truncation)
    if n < 1:
        raise DomainError("truncation must be >= 1")
    b = apply_hilbert_series(a, n).coeffs
    return complex(np.dot(b, coefficient_table(t, n - 1)))


def multiplier_identity_residual(a, t: float, truncation: Optional[int] = 10**4,
                                 *, tol: Optional[float] = None) -> float:
    """``|Phi(H f)(t) - psi(t) Phi f (t)|``.

    ``truncation`` is passed to :func:`phi_of_hilbert_image`.  When ``tol`` is
    given and the residual exceeds it a :class:`RuntimeWarning` is issued,
    since at finite truncation the slowly decaying tail dominates.
    """
    a = _as_series(a)
    lhs = phi_of_hilbert_image(a, t, truncation)
    rhs = multiplier_psi(t) * phi_transform_poly(a, t)
    residual = abs(lhs - rhs)
    if tol is not None and residual > tol:
        warnings.warn(
            f"multiplier residual {residual:.3e} at truncation {truncation} exceeds "
            f"{tol:g}; the coefficient tail decays like N^-1/2",
            RuntimeWarning, stacklevel=2,
        )
    return residual


@dataclass(frozen=True)
class MultiplierConvergence:
    """Truncated multiplier residuals and their fitted power law in ``N``.

    ``residuals`` are signed (real part).  ``slope`` is the exponent ``p`` of
    the best model ``N**p * (A g_1(N) + B g_2(N))``, where ``g_1, g_2`` are
    ``1, log N`` at ``t = 0`` and ``cos(t log N), sin(t log N)`` for ``t > 0``.
    """

    t: float
    truncations: np.ndarray
    residuals: np.ndarray
    slope: float
    fit_quality: float

    @property
    def final_residual(self) -> float:
        return float(abs(self.residuals[-1]))


def fit_convergence_slope(ns: Sequence[float], residuals: Sequence[float], t: float,
                          p_grid: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """Fit ``r(N) = N**p (A g_1 + B g_2)`` by scanning ``p``.

    For each ``p`` the amplitudes come from linear least squares; the ``p``
    with the smallest relative misfit wins.  Returns ``(p, relative misfit)``.
    """
    ns = np.asarray(ns, dtype=float)
    r = np.asarray(residuals, dtype=float)
    if ns.size < 4 or ns.size != r.size:
        raise DomainError("need at least four (N, residual) pairs of equal length")
    logn = np.log(ns)
    if t == 0.0:
        basis = np.column_stack([np.ones_like(logn), logn])
    else:
        basis = np.column_stack([np.cos(t * logn), np.sin(t * logn)])
    if p_grid is None:
        p_grid = np.linspace(-2.0, 0.5, 2501)
    best = (math.nan, math.inf)
    for p in p_grid:
        y = r * ns ** (-p)
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        misfit = float(np.linalg.norm(y - basis @ coef) / np.linalg.norm(y))
        if misfit < best[1]:
            best = (float(p), misfit)
    return best


def multiplier_convergence(a, t: float, truncations: Sequence[int]) -> MultiplierConvergence:
    """Signed residuals ``Phi(H f)(t) - psi(t) Phi f(t)`` over ``truncations`` and their slope.

    One pass up to ``max(truncations)`` provides every partial sum.
    """
    a = _as_series(a)
    t = _check_t(t)
    ns = np.array(sorted(int(n) for n in truncations))
    if ns[0] < 1:
        raise DomainError("truncations must be >= 1")
    n_top = int(ns[-1])
    b = apply_hilbert_series(a, n_top).coeffs
    partial = np.cumsum(b * coefficient_table(t, n_top - 1))
    target = multiplier_psi(t) * phi_transform_poly(a, t)
    residuals = (partial[ns - 1] - target).real
    slope, misfit = fit_convergence_slope(ns, residuals, t)
    return MultiplierConvergence(t, ns, residuals, slope, misfit)


def orthogonality_integral(n: int, m: int, *, weight: Callable[[float], float] = weight_w,
                           t_max: Optional[float] = None, tol: float = 1e-12) -> float:
    """``I_nm = int_0^t_max c_n(t) c_m(t) weight(t) dt``.

    ``t_max`` defaults to 60, where ``sech(pi t)`` is below ``1e-80``.  A
    :class:`RuntimeWarning` flags an integrand at ``t_max`` above ``tol``.
    """
    n, m = int(n), int(m)
    if not (0 <= n <= 20 and 0 <= m <= 20):
        raise DomainError("orthogonality integrals are supported for 0 <= n, m <= 20")
    t_max = ORTHOGONALITY_T_MAX if t_max is None else float(t_max)
    if not t_max > 0.0:
        raise DomainError("t_max must be positive")
    top = max(n, m)

    def integrand(t):
        c = coefficient_table(t, top)
        return c[n] * c[m] * weight(t)

    edge = abs(integrand(t_max))
    if edge > tol:
        warnings.warn(f"integrand at t_max={t_max:g} is {edge:.3e} > {tol:g}",
                      RuntimeWarning, stacklevel=2)
    # Nodes cluster near both ends of [0, t_max]; split so the bulk near t ~ 1 is resolved.
    split = min(8.0, t_max)
    total = 0.0
    for lo, hi in ((0.0, split), (split, t_max)):
        if hi <= lo:
            continue
        width = hi - lo
        res = integrate_unit(lambda s: integrand(lo + width * s), abs_tol=tol / width,
                             rel_tol=tol, max_evals=50_000)
        total += width * res.raise_if_unconverged(f"I_{n}{m}").value.real
    return total


def orthogonality_residual(n: int, m: int, t_max: Optional[float] = None, *,
                           weight: Callable[[float], float] = weight_w,
                           tol: float = 1e-12) -> Tuple[float, float]:
    """``(|I_nm|, I_nn)``: off-diagonal size and the diagonal normalizer.

    For ``n == m`` both entries are ``I_nn``.
    """
    off = orthogonality_integral(n, m, weight=weight, t_max=t_max, tol=tol)
    diag = off if n == m else orthogonality_integral(n, n, weight=weight, t_max=t_max, tol=tol)
    return abs(off), diag


def gelfand_map_eval(f: Callable[[complex], complex], w_point: complex) -> complex:
    """``(G f)(w) = 2/(1+w) f((w-1)/(w+1))`` for ``Re w > 0``."""
    w = complex(w_point)
    if not w.real > 0.0:
        raise DomainError(f"the Gelfand map needs Re w > 0, got {w!r}")
    return 2.0 / (1.0 + w) * f((w - 1.0) / (w + 1.0))


def gelfand_norm_ratio(a, tol: float = 1e-12) -> float:
    """``||G f||**2 / ||f||**2`` with ``||F||**2 = (1/2pi) int |F(iy)|**2 dy``.

    The boundary values of ``G f`` on the imaginary axis are used directly.
    The map rescales every norm by the same factor, which this reports.
    """
    a = _as_series(a)
    scale = float(np.max(np.abs(a.coeffs)))
    if scale == 0.0:
        raise DomainError("zero function has no norm ratio")
    # The ratio is scale invariant; normalizing keeps the absolute tolerance meaningful.
    a = PowerSeries(a.coeffs / scale)
    norm_disk = float(np.sum(np.abs(a.coeffs) ** 2))

    def boundary(y):
        w = complex(0.0, y)
        return 2.0 / (1.0 + w) * a((w - 1.0) / (w + 1.0))

    res = integrate_from_zero(lambda y: abs(boundary(y)) ** 2 + abs(boundary(-y)) ** 2,
                              abs_tol=tol, rel_tol=tol)
    return res.raise_if_unconverged("Gelfand norm").value.real / (2.0 * math.pi) / norm_disk


def spectral_measure_density(x: float) -> float:
    """``(2/pi**2) arccosh(pi/x)`` on ``0 < x <= pi``; zero at ``pi``, log-singular at 0."""
    x = float(x)
    if not (0.0 < x <= math.pi):
        raise DomainError(f"density is defined on (0, pi], got {x!r}")
    # arccosh(1 + d) with d = pi/x - 1 computed from the gap pi - x.
    d = (math.pi - x) / x
    return 2.0 / math.pi ** 2 * math.log1p(d + math.sqrt(d * (d + 2.0)))


def _density_from_fraction(s: float, oms: float) -> float:
    # x = pi s; the complement keeps arccosh accurate as x -> pi.
    if s <= 0.0:
        return math.inf
    d = oms / s
    return 2.0 / math.pi ** 2 * math.log1p(d + math.sqrt(d * (d + 2.0)))


@dataclass(frozen=True)
class SpectralMeasure:
    """``dr = density(x) dx`` on ``[0, pi]``."""

    density: Callable[[float], float] = spectral_measure_density
    support: Tuple[float, float] = (0.0, math.pi)

    def moment(self, g: Callable[[float], float], tol: float = 1e-12) -> float:
        """``int_0^pi g(x) dr(x)`` by tanh-sinh in ``x = pi s``."""
        integrand = lambda s, oms: g(math.pi * s) * _density_from_fraction(s, oms)
        res = integrate_unit(integrand, abs_tol=tol, rel_tol=tol, with_aux=True)
        return math.pi * res.raise_if_unconverged("spectral moment").value.real

    def mass(self, tol: float = 1e-12) -> float:
        return self.moment(lambda x: 1.0, tol)


def pushforward_moment(g: Callable[[float], float], *,
                       weight: Callable[[float], float] = spectral_weight,
                       scale: float = 1.0, tol: float = 1e-12) -> float:
    """``scale * int_0^inf g(psi(t)) weight(t) dt``."""
    integrand = lambda t: g(multiplier_psi(t)) * weight(t) if t < 300.0 else 0.0
    res = integrate_from_zero(integrand, abs_tol=tol, rel_tol=tol)
    return scale * res.raise_if_unconverged("pushforward moment").value.real


@dataclass
class SpectralProfile:
    """Values of a function of ``t`` sampled on a grid, with the weight at each node."""

    t_grid: np.ndarray
    values: np.ndarray
    weight: np.ndarray = field(default=None)

    def __post_init__(self):
        self.t_grid = np.asarray(self.t_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.t_grid.ndim != 1 or self.t_grid.shape != self.values.shape:
            raise DomainError("t_grid and values must be 1-d arrays of equal length")
        if np.any(self.t_grid < 0) or np.any(np.diff(self.t_grid) <= 0):
            raise DomainError("t_grid must be increasing and non-negative")
        if self.weight is None:
            self.weight = np.array([weight_w(t) for t in self.t_grid])
        self.weight = np.asarray(self.weight, dtype=float)
        if np.any(self.weight <= 0):
            raise DomainError("weights must be positive")

    @classmethod
    def of_polynomial(cls, a, t_grid: Sequence[float],
                      weight: Callable[[float], float] = weight_w) -> "SpectralProfile":
        ts = np.asarray(t_grid, dtype=float)
        return cls(ts, [phi_transform_poly(a, t) for t in ts], [weight(t) for t in ts])


def spectrum_report(grid_size: int = 2001, t_far: float = 40.0) -> ResidualReport:
    """Residual checks for the spectrum ``[0, pi]`` and the measure ``dr``."""
    report = ResidualReport()
    ts = np.linspace(0.0, 12.0, grid_size)
    psi = np.array([multiplier_psi(t) for t in ts])
    report.add("multiplier supremum at t=0", "psi(0) = pi", abs(psi[0] - math.pi), 1e-15)
    report.add("multiplier infimum tends to 0", "psi(t) -> 0 as t -> inf",
               multiplier_psi(t_far), 1e-12)
    # A flat step counts as a violation, hence the floor at the smallest subnormal.
    worst_step = float(np.max(np.diff(psi)))
    violation = 0.0 if worst_step < 0.0 else max(worst_step, 5e-324)
    report.add("multiplier strictly decreasing", "psi injective on t >= 0", violation, 0.0)
    cosh_check = max(abs(multiplier_psi(t) * math.cosh(math.pi * t) - math.pi)
                     for t in np.linspace(0.0, 5.0, 51))
    report.add("psi cosh(pi t) = pi", "multiplier closed form", cosh_check, 1e-14)
    link = max(abs(latent_parameter_from_eigenvalue(multiplier_psi(t)).mu - complex(0.5, t))
               for t in (0.1, 0.5, 1.0))
    report.add("eigenvalue map inverts the multiplier", "M = psi(t) <-> mu = 1/2 + it",
               link, 1e-10)
    measure = SpectralMeasure()
    report.add("density vanishes at pi", "arccosh(1) = 0", spectral_measure_density(math.pi), 0.0)
    report.add("spectral measure mass", "int dr = 1", abs(measure.mass() - 1.0), 1e-8)
    return report
