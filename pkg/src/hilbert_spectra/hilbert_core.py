"""The Hilbert matrix and Hill's latent eigensequences.

The Hilbert matrix ``H = (1/(i+j+1))`` acts on Taylor coefficients of
functions on the unit disk.  For ``0 < Re mu <= 1/2`` the normalized latent
eigenfunction is

    f_mu(z) = (1 - z)**(mu - 1) * 2F1(mu, mu; 1; z),     H f_mu = M f_mu,

with ``M = pi / sin(pi mu)``.  Hill's sequence ``x_n(mu)`` is the coefficient
sequence of ``M * f_mu``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import CancellationError, DomainError
from .quadrature import IntegrationResult, integrate_unit
from .special_functions import gamma, hyp2f1, legendre_p

__all__ = [
    "DivergenceProbe",
    "LatentParameter",
    "PowerSeries",
    "apply_hilbert_integral",
    "apply_hilbert_series",
    "eigen_relation_residual",
    "eigenfunction_eval",
    "eigenfunction_legendre_eval",
    "eigenvalue",
    "ell2_divergence_probe",
    "hill_sequence",
    "hill_sequence_alternating",
    "latent_parameter_from_eigenvalue",
    "latent_solutions",
    "taylor_coefficients",
]

HILL_ROUTE_TOL = 1e-8
HILL_CHECK_MAX_N = 30


@dataclass(frozen=True)
class LatentParameter:
    """A point ``mu`` of the latent strip ``0 < Re mu <= 1/2``.

    On the line ``Re mu = 1/2`` the pair ``1/2 +- it`` has the same
    eigenfunction; the representative with ``Im mu >= 0`` is stored.
    """

    mu: complex

    def __post_init__(self):
        mu = complex(self.mu)
        if not cmath.isfinite(mu):
            raise DomainError(f"mu must be finite, got {mu!r}")
        if not (0.0 < mu.real <= 0.5):
            raise DomainError(f"mu = {mu!r} lies outside the strip 0 < Re mu <= 1/2")
        if mu.real == 0.5 and mu.imag < 0.0:
            mu = mu.conjugate()
        object.__setattr__(self, "mu", mu)

    @property
    def eigenvalue(self) -> complex:
        return eigenvalue(self)

    @classmethod
    def on_critical_line(cls, t: float) -> "LatentParameter":
        return cls(complex(0.5, t))


def _mu(mu) -> complex:
    return mu.mu if isinstance(mu, LatentParameter) else LatentParameter(mu).mu


def eigenvalue(mu) -> complex:
    """Latent eigenvalue ``pi / sin(pi mu)``."""
    m = _mu(mu)
    return math.pi / cmath.sin(math.pi * m)


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor coefficients ``a_0, ..., a_N`` (read-only)."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex).reshape(-1)
        if arr.size == 0:
            raise DomainError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise DomainError("power series coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __call__(self, z: complex) -> complex:
        return complex(np.polyval(self.coeffs[::-1], z))

    @classmethod
    def monomial(cls, n: int) -> "PowerSeries":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = 1.0
        return cls(c)


def taylor_coefficients(mu, n_max: int) -> np.ndarray:
    """Taylor coefficients ``c_0..c_{n_max}`` of ``f_mu``.

    Cauchy product of the binomial series of ``(1-z)**(mu-1)`` with the
    coefficients ``(mu)_k**2 / k!**2`` of ``2F1(mu, mu; 1; z)``.  Both factor
    sequences come from ratio recurrences; no gamma function is evaluated.
    """
    m = complex(mu.mu if isinstance(mu, LatentParameter) else mu)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    k = np.arange(1, n_max + 1, dtype=float)
    binom = np.ones(n_max + 1, dtype=complex)
    hyper = np.ones(n_max + 1, dtype=complex)
    if n_max:
        binom[1:] = np.cumprod((k - m) / k)
        hyper[1:] = np.cumprod(((k - 1.0 + m) / k) ** 2)
    return np.convolve(binom, hyper)[: n_max + 1]


def _complex_fraction(z: complex):
    return Fraction(z.real), Fraction(z.imag)


def hill_sequence_alternating(mu, n_max: int) -> np.ndarray:
    """Hill's alternating binomial sum, evaluated in exact rational arithmetic.

    ``Gamma(k+mu) Gamma(k+1-mu) = Gamma(mu) Gamma(1-mu) prod_{j<k} (j(j+1) + q)``
    with ``q = mu (1 - mu)``, so the alternating sum is a rational function of
    the (floating point, hence rational) number ``q``.  Only the final scaling
    by ``Gamma(mu) Gamma(1-mu)`` is rounded, which makes this route immune to
    the cancellation that ruins the same sum in double precision.
    """
    m = _mu(mu)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    q_re, q_im = _complex_fraction(m * (1.0 - m))
    # prod_{j<k}(j(j+1)+q) / k!^2 as exact complex rationals.
    terms = []
    p_re, p_im = Fraction(1), Fraction(0)
    fact2 = 1
    for kk in range(n_max + 1):
        if kk:
            a = kk - 1
            shift = a * (a + 1)
            p_re, p_im = (p_re * (shift + q_re) - p_im * q_im,
                          p_re * q_im + p_im * (shift + q_re))
            fact2 *= kk * kk
        terms.append((p_re / fact2, p_im / fact2))
    scale = gamma(m) * gamma(1.0 - m)
    out = np.empty(n_max + 1, dtype=complex)
    for n in range(n_max + 1):
        s_re, s_im = Fraction(0), Fraction(0)
        for kk in range(n + 1):
            c = math.comb(n, kk) * (-1 if kk % 2 else 1)
            s_re += c * terms[kk][0]
            s_im += c * terms[kk][1]
        out[n] = scale * complex(float(s_re), float(s_im))
    return out


def hill_sequence(mu, n_max: int, *, check: bool = True,
                  tol: float = HILL_ROUTE_TOL) -> np.ndarray:
    """Hill's latent eigensequence ``x_0(mu), ..., x_{n_max}(mu)``.

    Computed as ``(pi / sin(pi mu))`` times the Taylor coefficients of
    ``f_mu``.  With ``check=True`` the first ``min(n_max, 30) + 1`` entries are
    compared with the alternating binomial sum and a
    :class:`CancellationError` is raised if the relative difference exceeds
    ``tol``.
    """
    m = _mu(mu)
    x = eigenvalue(m) * taylor_coefficients(m, n_max)
    if check:
        n_chk = min(n_max, HILL_CHECK_MAX_N)
        ref = hill_sequence_alternating(m, n_chk)
        diff = np.abs(x[: n_chk + 1] - ref)
        rel = diff / np.maximum(np.abs(ref), np.finfo(float).tiny)
        worst = int(np.argmax(rel))
        if rel[worst] > tol:
            raise CancellationError(
                f"Hill sequence routes disagree at n={worst}: relative difference "
                f"{rel[worst]:.3e} > {tol:.1e}"
            )
    return x


def _check_disk(z: complex) -> complex:
    z = complex(z)
    if not abs(z) < 1.0:
        raise DomainError(f"z = {z!r} is not in the open unit disk")
    return z


def eigenfunction_eval(mu, z: complex, *, one_minus_z=None) -> complex:
    """Closed form ``f_mu(z) = (1-z)**(mu-1) 2F1(mu, mu; 1; z)``.

    The power uses the principal logarithm; ``1 - z`` has positive real part
    on the disk.  ``one_minus_z`` may be supplied when ``z`` is close to 1.
    """
    m = _mu(mu)
    if one_minus_z is None:
        z = _check_disk(z)
        omz = complex(1.0 - z)
    else:
        # z may round to 1.0 while the supplied distance to 1 is still positive.
        z, omz = complex(z), complex(one_minus_z)
        if not (abs(z) <= 1.0 and omz.real > 0.0):
            raise DomainError(f"z = {z!r} (1 - z = {omz!r}) is not in the open unit disk")
    return cmath.exp((m - 1.0) * cmath.log(omz)) * hyp2f1(m, m, 1.0, z, one_minus_z=omz)


def eigenfunction_legendre_eval(mu, z: float) -> complex:
    """Legendre form ``P_{mu-1}((1+z)/(1-z)) / (1-z)`` on the segment ``[0, 1)``."""
    m = _mu(mu)
    z = complex(z)
    if z.imag != 0.0 or not (0.0 <= z.real < 1.0):
        raise DomainError(f"the Legendre form needs real 0 <= z < 1, got {z!r}")
    r = z.real
    return legendre_p(m - 1.0, (1.0 + r) / (1.0 - r)) / (1.0 - r)


def apply_hilbert_series(a: PowerSeries, out_len: int) -> PowerSeries:
    """Coefficients ``b_n = sum_m a_m / (n + m + 1)``, ``n < out_len``.

    The input is treated as the finite sequence it is; no quadrature.
    """
    if out_len < 1:
        raise DomainError("out_len must be >= 1")
    if not isinstance(a, PowerSeries):
        a = PowerSeries(a)
    n = np.arange(out_len, dtype=float)[:, None]
    m = np.arange(len(a), dtype=float)[None, :]
    return PowerSeries((a.coeffs[None, :] / (n + m + 1.0)).sum(axis=1))


def apply_hilbert_integral(f: Callable, z: complex, *, tol: float = 1e-12,
                           with_complement: bool = False,
                           max_evals: int = 20_000) -> IntegrationResult:
    """Integral form ``(H f)(z) = int_0^1 f(s) / (1 - s z) ds``.

    ``with_complement=True`` calls ``f(s, 1 - s)`` so that integrands singular
    at ``s = 1`` can be evaluated from the exact distance to the endpoint.
    """
    z = _check_disk(z)
    if with_complement:
        integrand = lambda s, oms: f(s, oms) / (1.0 - s * z)
    else:
        integrand = lambda s: f(s) / (1.0 - s * z)
    result = integrate_unit(integrand, abs_tol=tol, rel_tol=tol, max_evals=max_evals,
                            with_aux=with_complement)
    return result.raise_if_unconverged("Hilbert integral")


def eigen_relation_residual(mu, z: complex, *, tol: float = 1e-12) -> float:
    """``|int_0^1 f_mu(s)/(1-sz) ds - M f_mu(z)|`` for the latent pair."""
    m = _mu(mu)
    f = lambda s, oms: eigenfunction_eval(m, s, one_minus_z=oms)
    lhs = apply_hilbert_integral(f, z, tol=tol, with_complement=True).value
    return abs(lhs - eigenvalue(m) * eigenfunction_eval(m, z))


def latent_solutions(M: complex) -> tuple:
    """All ``mu`` with ``0 < Re mu <= 1/2`` and ``pi / sin(pi mu) = M``.

    One value, except for real ``M`` in ``(0, pi)`` where the conjugate pair
    ``1/2 +- it`` is returned, ``t > 0`` first.

    Raises
    ------
    DomainError
        If ``Re M <= 0``.
    """
    M = complex(M)
    if not cmath.isfinite(M) or not M.real > 0.0:
        raise DomainError(f"latent eigenvalues have Re M > 0, got {M!r}")
    if M.imag == 0.0 and M.real < math.pi:
        d = math.pi / M.real - 1.0
        t = math.log1p(d + math.sqrt(d * (2.0 + d))) / math.pi
        return (complex(0.5, t), complex(0.5, -t))
    if M.imag == 0.0:
        return (complex(math.asin(math.pi / M.real) / math.pi),)
    mu = cmath.asin(math.pi / M) / math.pi
    return (complex(min(mu.real, 0.5), mu.imag),)


def latent_parameter_from_eigenvalue(M: complex) -> LatentParameter:
    """Canonical latent parameter of the eigenvalue ``M`` (``Im mu >= 0`` on
    the line ``Re mu = 1/2``, where the two solutions share one eigenfunction)."""
    return LatentParameter(latent_solutions(M)[0])


@dataclass(frozen=True)
class DivergenceProbe:
    n_values: tuple
    partial_sums: tuple
    ratios: tuple
    delta: float
    divergent_trend: bool

    @property
    def verdict(self) -> str:
        return "divergent-trend" if self.divergent_trend else "inconclusive"


def ell2_divergence_probe(mu, n_list: Sequence[int], *, delta: float = 0.05) -> DivergenceProbe:
    """Partial sums ``S_N = sum_{n<=N} |x_n|**2`` of Hill's sequence.

    The verdict is ``divergent-trend`` when ``S_{4N} > (1 + delta) S_N`` for
    every probed ``N``.
    """
    n_list = [int(n) for n in n_list]
    if any(n < 0 for n in n_list) or n_list != sorted(set(n_list)):
        raise DomainError("n_list must be strictly increasing non-negative integers")
    top = 4 * n_list[-1] if n_list else 0
    x = hill_sequence(mu, top, check=True)
    cumulative = np.cumsum(np.abs(x) ** 2)
    sums = tuple(float(cumulative[n]) for n in n_list)
    ratios = tuple(float(cumulative[4 * n] / cumulative[n]) for n in n_list)
    ok = bool(n_list) and all(r > 1.0 + delta for r in ratios)
    return DivergenceProbe(tuple(n_list), sums, ratios, delta, ok)
