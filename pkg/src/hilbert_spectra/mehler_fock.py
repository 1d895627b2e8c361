"""Mehler-Fock transform pair and the conical kernel identities.

Forward transform of ``f: [1, inf) -> C``::

    F(t) = int_1^inf f(x) P_{it-1/2}(x) dx,                     t >= 0

inverse::

    f(x) = int_0^inf t tanh(pi t) P_{it-1/2}(x) F(t) dt,        x >= 1.

Integrals over ``[1, inf)`` run in the variable ``u`` with ``x = cosh u``, and
the conical kernel is evaluated from ``u`` directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional

from .errors import DomainError, ExistenceError, TailError
from .hilbert_core import LatentParameter, eigenfunction_eval
from .quadrature import IntegrationResult, integrate_from_one, integrate_unit
from .special_functions import conical_p, conical_p_cosh, legendre_p_cosh

__all__ = [
    "DEFAULT_T_CAP",
    "PhiZ",
    "RealLineFunction",
    "eigenfunction_via_transform",
    "general_mu_residual",
    "general_mu_transform_eval",
    "kernel_identity_residual",
    "mf_forward",
    "mf_forward_result",
    "mf_inverse",
    "mf_round_trip",
    "phi_transform_closed_form",
    "transform_representation_residual",
]

# cosh(pi t) amplification makes certified residuals impractical beyond this.
DEFAULT_T_CAP = 3.0
_T_MAX_LIMIT = 60.0


@dataclass(frozen=True)
class RealLineFunction:
    """A function on ``[1, inf)`` with declared decay ``|f(x)| = O(x**-p)``.

    The transform exists when ``p > 1/2`` (``f(x)/sqrt(x)`` integrable).
    """

    eval: Callable[[float], complex]
    decay_exponent: float

    def __post_init__(self):
        if not self.decay_exponent > 0.5:
            raise ExistenceError(
                f"Mehler-Fock transform needs decay exponent > 1/2, got {self.decay_exponent!r}"
            )

    def __call__(self, x: float) -> complex:
        return self.eval(x)


@dataclass(frozen=True)
class PhiZ:
    """``phi_z(x) = 1 / (x (1 - z) + 1 + z)`` for a point ``z`` of the unit disk."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1.0:
            raise DomainError(f"phi_z needs |z| < 1, got {z!r}")
        object.__setattr__(self, "z", z)

    decay_exponent = 1.0

    def eval(self, x: float) -> complex:
        return 1.0 / (x * (1.0 - self.z) + 1.0 + self.z)

    __call__ = eval

    def as_function(self) -> RealLineFunction:
        return RealLineFunction(self.eval, self.decay_exponent)


def _check_t(t: float) -> float:
    t = float(t)
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    return t


def mf_forward_result(f, t: float, *, tol: float = 1e-12,
                      max_evals: int = 50_000) -> IntegrationResult:
    """Forward transform at ``t`` with the full quadrature diagnostics."""
    t = _check_t(t)
    p = float(f.decay_exponent) + 0.5
    if not p > 1.0:
        raise ExistenceError(
            f"integrand f(x) P(x) decays like x^-{p:g}; the transform needs more than x^-1"
        )
    if t == 0.0 and p < 1.0 + 1e-9:
        raise ExistenceError("decay too slow for the logarithmic kernel at t = 0")
    evaluate = f.eval
    integrand = lambda x, u: evaluate(x) * conical_p_cosh(t, u)
    # A log factor in the kernel at t = 0 is absorbed by a slightly smaller exponent.
    result = integrate_from_one(integrand, p if t else p - 1e-3 * (p - 1.0),
                                abs_tol=tol, rel_tol=tol, max_evals=max_evals, with_aux=True)
    return result.raise_if_unconverged(f"Mehler-Fock transform at t={t:g}")


def mf_forward(f, t: float, tol: float = 1e-12) -> complex:
    """Mehler-Fock transform ``int_1^inf f(x) P_{it-1/2}(x) dx``.

    ``f`` is a :class:`RealLineFunction` (or anything with ``eval`` and
    ``decay_exponent``, such as :class:`PhiZ`).

    Raises
    ------
    ExistenceError
        If the declared decay does not make the integral converge.
    ConvergenceError
        If the quadrature misses ``tol``.
    """
    return mf_forward_result(f, t, tol=tol).value


def phi_transform_closed_form(z: complex, t: float) -> complex:
    """Transform of ``phi_z`` from the kernel identity, valid for real ``0 <= z < 1``.

    ``P phi_z (t) = pi P_{it-1/2}((1+z)/(1-z)) / ((1 - z) cosh(pi t))``.
    """
    z = complex(z)
    if z.imag != 0.0 or not (0.0 <= z.real < 1.0):
        raise DomainError("closed form needs real 0 <= z < 1")
    r = z.real
    t = _check_t(t)
    return math.pi * conical_p(t, (1.0 + r) / (1.0 - r)) / ((1.0 - r) * math.cosh(math.pi * t))


def _choose_t_max(fhat, tol: float) -> float:
    quiet = 0
    t = 1.0
    while t <= _T_MAX_LIMIT:
        if t * math.tanh(math.pi * t) * abs(fhat(t)) < tol / 10.0:
            quiet += 1
            if quiet >= 2:
                return t
        else:
            quiet = 0
        t += 0.5
    raise TailError(f"transform does not decay below {tol / 10:g} by t = {_T_MAX_LIMIT:g}")


def mf_inverse(fhat: Callable[[float], complex], x: float, t_max: Optional[float] = None,
               tol: float = 1e-8) -> complex:
    """Inverse transform ``int_0^inf t tanh(pi t) P_{it-1/2}(x) fhat(t) dt``.

    The integral is truncated at ``t_max``; when omitted it is the first
    ``t`` (on a 0.5 grid) past which ``t tanh(pi t) |fhat(t)| < tol/10``.

    Raises
    ------
    TailError
        If ``t_max * |fhat(t_max)| > tol``.
    """
    x = float(x)
    if not x >= 1.0:
        raise DomainError(f"inverse transform needs x >= 1, got {x!r}")
    if t_max is None:
        t_max = _choose_t_max(fhat, tol)
    else:
        t_max = float(t_max)
        if t_max * abs(fhat(t_max)) > tol:
            raise TailError(f"|fhat(t_max)| t_max = {t_max * abs(fhat(t_max)):.3e} exceeds {tol:g}")
    alpha = math.acosh(x)

    def integrand(s):
        t = t_max * s
        return t * math.tanh(math.pi * t) * conical_p_cosh(t, alpha) * fhat(t)

    result = integrate_unit(integrand, abs_tol=tol / (10.0 * t_max), rel_tol=tol)
    return t_max * result.raise_if_unconverged("inverse Mehler-Fock transform").value


def mf_round_trip(f, xs: Iterable[float], *, tol: float = 1e-8,
                  forward_tol: float = 1e-11) -> Dict[float, complex]:
    """``mf_inverse(mf_forward(f))`` at each ``x``; forward values are shared."""
    cache: Dict[float, complex] = {}

    def fhat(t):
        value = cache.get(t)
        if value is None:
            value = mf_forward(f, t, tol=forward_tol)
            cache[t] = value
        return value

    t_max = _choose_t_max(fhat, tol)
    return {float(x): mf_inverse(fhat, x, t_max=t_max, tol=tol) for x in xs}


def kernel_identity_residual(t: float, y: float, *, t_cap: float = DEFAULT_T_CAP,
                             tol: float = 1e-13) -> float:
    """``|P_{it-1/2}(y) - cosh(pi t)/pi int_1^inf P_{it-1/2}(x)/(x+y) dx|``."""
    t = _check_t(t)
    if t > t_cap:
        raise DomainError(f"t = {t:g} exceeds t_cap = {t_cap:g}")
    y = float(y)
    if not y >= 1.0:
        raise DomainError(f"y must be >= 1, got {y!r}")
    kernel = RealLineFunction(lambda x: 1.0 / (x + y), 1.0)
    integral = mf_forward(kernel, t, tol=tol)
    return abs(conical_p(t, y) - math.cosh(math.pi * t) / math.pi * integral)


def eigenfunction_via_transform(t: float, z: complex, *, t_cap: float = DEFAULT_T_CAP,
                                tol: float = 1e-13) -> complex:
    """``cosh(pi t)/pi * (P phi_z)(t)``, which equals ``f_{1/2+it}(z)``."""
    t = _check_t(t)
    if t > t_cap:
        raise DomainError(f"t = {t:g} exceeds t_cap = {t_cap:g}")
    return math.cosh(math.pi * t) / math.pi * mf_forward(PhiZ(z), t, tol=tol)


def general_mu_transform_eval(mu, z: complex, *, tol: float = 1e-12) -> complex:
    """``sin(pi mu)/pi * int_1^inf P_{mu-1}(x) phi_z(x) dx`` for ``mu`` in the strip.

    ``P_{mu-1}(x)`` decays like ``x**-Re(mu)``, so the integrand decays like
    ``x**-(1 + Re mu)``; the tail bound handles every ``Re mu > 0``.
    """
    m = mu.mu if isinstance(mu, LatentParameter) else LatentParameter(mu).mu
    phi = PhiZ(z)
    nu = m - 1.0
    integrand = lambda x, u: legendre_p_cosh(nu, u) * phi.eval(x)
    p = 1.0 + m.real
    if m.real == 0.5:
        p -= 1e-3
    result = integrate_from_one(integrand, p, abs_tol=tol, rel_tol=tol,
                                max_evals=50_000, with_aux=True)
    value = result.raise_if_unconverged("eigenfunction transform").value
    return cmath.sin(math.pi * m) / math.pi * value


def transform_representation_residual(t: float, z: complex, **kw) -> float:
    """``|eigenfunction_via_transform(t, z) - f_{1/2+it}(z)|``."""
    return abs(eigenfunction_via_transform(t, z, **kw) - eigenfunction_eval(complex(0.5, t), z))


def general_mu_residual(mu, z: complex, **kw) -> float:
    """``|general_mu_transform_eval(mu, z) - f_mu(z)|``."""
    return abs(general_mu_transform_eval(mu, z, **kw) - eigenfunction_eval(mu, z))
