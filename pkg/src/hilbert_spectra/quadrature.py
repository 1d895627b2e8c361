"""Double-exponential quadrature on [0, 1], [1, inf) and [0, inf).

All three engines are trapezoidal sums in a transformed variable ``v`` with
the step halved level by level:

* ``[0, 1]``: tanh-sinh, ``s = 1/(1 + exp(-pi sinh v))``.  The distance to
  the right endpoint, ``1 - s = 1/(1 + exp(pi sinh v))``, is available to the
  integrand without cancellation.
* ``[1, inf)``: ``x = 1 + 2 sinh(u/2)**2 = cosh u`` truncated at a cutoff
  chosen from an analytic tail bound, then tanh-sinh on ``[0, u_cut]``.
* ``[0, inf)``: exp-sinh, ``x = exp(pi/2 sinh v)``.

The error estimate is the difference between consecutive levels.  The
returned value belongs to the level with the smallest estimate, so a larger
evaluation budget never increases ``est_error``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ConvergenceError, DomainError, IntegrandEvaluationError

__all__ = [
    "Interval",
    "IntegrationRequest",
    "IntegrationResult",
    "integrate",
    "integrate_from_one",
    "integrate_from_zero",
    "integrate_semiinf_tail_bound",
    "integrate_unit",
]

_H0 = 0.5
_MIN_LEVELS = 3
# pi*sinh(v) stays below 700 so exp() never overflows.
_V_MAX_UNIT = math.asinh(700.0 / math.pi)
_V_MAX_EXP = math.asinh(2.0 * 700.0 / math.pi)
_U_MAX = 700.0


class Interval(str, enum.Enum):
    UNIT = "unit"
    FROM_ONE = "semi-infinite-from-1"
    FROM_ZERO = "semi-infinite-from-0"


@dataclass(frozen=True)
class IntegrationRequest:
    """What to integrate, where, and how accurately.

    ``with_aux`` makes the engine call ``integrand(x, aux)`` where ``aux`` is
    ``1 - x`` on the unit interval, ``u`` with ``x = cosh u`` on
    ``[1, inf)``, and ``x`` again on ``[0, inf)``.  ``decay_exponent`` ``p``
    (``|f(x)| = O(x**-p)``) is required on ``[1, inf)``.
    """

    integrand: Callable
    interval: Interval = Interval.UNIT
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_evals: int = 20_000
    decay_exponent: Optional[float] = None
    with_aux: bool = False

    def __post_init__(self):
        object.__setattr__(self, "interval", Interval(self.interval))
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_evals < 100:
            raise DomainError("max_evals must be at least 100")
        if self.interval is Interval.FROM_ONE:
            if self.decay_exponent is None or not self.decay_exponent > 1.0:
                raise DomainError(
                    "integration on [1, inf) needs a decay exponent > 1, "
                    f"got {self.decay_exponent!r}"
                )


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    est_error: float
    evals: int
    converged: bool
    tail_bound: float = 0.0
    cutoff: Optional[float] = None

    def raise_if_unconverged(self, what: str = "integral") -> "IntegrationResult":
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge: est_error={self.est_error:.3e} "
                f"after {self.evals} evaluations"
            )
        return self


def integrate_semiinf_tail_bound(decay_exponent: float, cutoff: float) -> float:
    """Bound on ``int_cutoff^inf x**-p dx``, i.e. ``cutoff**(1-p)/(p-1)``."""
    p = float(decay_exponent)
    if not p > 1.0:
        raise DomainError(f"tail bound needs decay exponent > 1, got {p!r}")
    if not cutoff > 0:
        raise DomainError(f"cutoff must be positive, got {cutoff!r}")
    return cutoff ** (1.0 - p) / (p - 1.0)


def _finite(value: complex) -> bool:
    return cmath.isfinite(value)


class _Trapezoid:
    """Level-refined trapezoid rule in the transformed variable ``v``.

    ``node(v)`` returns ``(args, jacobian, at_endpoint)``; the integrand is
    called as ``f(*args)``.
    """

    def __init__(self, f, node, v_lo, v_hi, abs_tol, rel_tol, max_evals):
        self.f = f
        self.node = node
        self.v_lo = v_lo
        self.v_hi = v_hi
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.max_evals = max_evals
        self.evals = 0

    def _term(self, v):
        args, jac, at_endpoint = self.node(v)
        if jac == 0.0 or at_endpoint:
            return 0j
        value = self.f(*args)
        self.evals += 1
        if not _finite(complex(value)):
            raise IntegrandEvaluationError(args[0], value)
        return complex(value) * jac

    def _first_level(self):
        h = _H0
        total = self._term(0.0)
        scale = abs(total)
        bounds = []
        for direction, limit in ((1.0, self.v_hi), (-1.0, self.v_lo)):
            k = 1
            quiet = 0
            last = 0.0
            while True:
                v = direction * k * h
                if abs(v) > abs(limit):
                    break
                term = self._term(v)
                total += term
                scale = max(scale, abs(term))
                last = abs(v)
                if abs(term) <= 1e-17 * scale or abs(term) * h <= 1e-4 * self.abs_tol:
                    quiet += 1
                    if quiet >= 3:
                        break
                else:
                    quiet = 0
                k += 1
            bounds.append(last)
        self.v_hi_eff, self.v_lo_eff = bounds[0], -bounds[1]
        return h * total

    def run(self) -> IntegrationResult:
        h = _H0
        current = self._first_level()
        best_value, best_err = current, math.inf
        level = 0
        converged = False
        while True:
            n_new = int((self.v_hi_eff - self.v_lo_eff) / h) + 1
            if self.evals + n_new > self.max_evals:
                break
            half = 0.5 * h
            k_lo = math.ceil((self.v_lo_eff / half - 1) / 2.0)
            k_hi = math.floor((self.v_hi_eff / half - 1) / 2.0)
            acc = 0j
            for k in range(k_lo, k_hi + 1):
                acc += self._term((2 * k + 1) * half)
            refined = 0.5 * current + half * acc
            level += 1
            h = half
            err = abs(refined - current)
            if err <= best_err:
                best_value, best_err = refined, err
            current = refined
            target = max(self.abs_tol, self.rel_tol * abs(refined))
            if level >= _MIN_LEVELS and err <= target:
                converged = True
                break
        if best_err == math.inf:
            best_err = abs(best_value)
        return IntegrationResult(best_value, best_err, self.evals, converged)


def _unit_node(v: float, with_aux: bool):
    e = math.pi * math.sinh(v)
    s = 1.0 / (1.0 + math.exp(-e))
    oms = 1.0 / (1.0 + math.exp(e))
    jac = math.pi * math.cosh(v) * s * oms
    at_endpoint = (s == 1.0 or s == 0.0) and not with_aux
    args = (s, oms) if with_aux else (s,)
    return args, jac, at_endpoint


def integrate_unit(f: Callable, *, abs_tol: float = 1e-12, rel_tol: float = 1e-12,
                   max_evals: int = 20_000, with_aux: bool = False) -> IntegrationResult:
    """Integrate ``f`` over ``[0, 1]``; endpoint singularities are allowed."""
    return integrate(IntegrationRequest(f, Interval.UNIT, abs_tol, rel_tol, max_evals,
                                        with_aux=with_aux))


def integrate_from_one(f: Callable, decay_exponent: float, *, abs_tol: float = 1e-12,
                       rel_tol: float = 1e-12, max_evals: int = 20_000,
                       with_aux: bool = False) -> IntegrationResult:
    """Integrate ``f`` over ``[1, inf)`` given ``|f(x)| = O(x**-decay_exponent)``."""
    return integrate(IntegrationRequest(f, Interval.FROM_ONE, abs_tol, rel_tol, max_evals,
                                        decay_exponent=decay_exponent, with_aux=with_aux))


def integrate_from_zero(f: Callable, *, abs_tol: float = 1e-12, rel_tol: float = 1e-12,
                        max_evals: int = 20_000, with_aux: bool = False) -> IntegrationResult:
    """Integrate ``f`` over ``[0, inf)``; ``f`` must decay at infinity."""
    return integrate(IntegrationRequest(f, Interval.FROM_ZERO, abs_tol, rel_tol, max_evals,
                                        with_aux=with_aux))


def _envelope_constant(f, with_aux, p, cutoff):
    """max |f(x)| x**p sampled at and below ``cutoff``."""
    best = 0.0
    for scale in (1.0, 0.5, 0.25, 0.125):
        x = max(cutoff * scale, 2.0)
        u = math.acosh(x)
        value = f(x, u) if with_aux else f(x)
        if not _finite(complex(value)):
            raise IntegrandEvaluationError(x, value)
        best = max(best, abs(value) * x ** p)
    return best


def _integrate_from_one(req: IntegrationRequest) -> IntegrationResult:
    p = float(req.decay_exponent)
    f = req.integrand
    target = req.abs_tol / 10.0
    # Cutoff with unit envelope constant, then refit the constant there.
    cutoff = (target * (p - 1.0)) ** (1.0 / (1.0 - p))
    cutoff = min(max(cutoff, 10.0), math.cosh(_U_MAX))
    const = _envelope_constant(f, req.with_aux, p, cutoff)
    if const > 0.0:
        wanted = (target * (p - 1.0) / const) ** (1.0 / (1.0 - p))
        cutoff = min(max(wanted, 10.0), math.cosh(_U_MAX))
        const = max(const, _envelope_constant(f, req.with_aux, p, cutoff))
    tail = const * integrate_semiinf_tail_bound(p, cutoff)
    u_cut = math.acosh(cutoff)

    def node(v):
        args, jac, at_endpoint = _unit_node(v, True)
        s, oms = args
        u = u_cut * s if s <= 0.5 else u_cut - u_cut * oms
        x = math.cosh(u)
        jac *= u_cut * math.sinh(u)
        return ((x, u) if req.with_aux else (x,)), jac, at_endpoint

    # The tail bound is part of the error budget.
    inner_tol = max(req.abs_tol - tail, 0.1 * req.abs_tol)
    inner = _Trapezoid(f, node, -_V_MAX_UNIT, _V_MAX_UNIT, inner_tol, req.rel_tol,
                       req.max_evals).run()
    est = inner.est_error + tail
    converged = inner.converged and est <= max(req.abs_tol, req.rel_tol * abs(inner.value))
    return IntegrationResult(inner.value, est, inner.evals, converged, tail, cutoff)


def integrate(req: IntegrationRequest) -> IntegrationResult:
    """Run the engine selected by ``req.interval``.

    A result whose error estimate misses the tolerance comes back with
    ``converged=False``; call :meth:`IntegrationResult.raise_if_unconverged`
    to turn that into a :class:`ConvergenceError`.
    """
    if req.interval is Interval.UNIT:
        return _Trapezoid(req.integrand, lambda v: _unit_node(v, req.with_aux),
                          -_V_MAX_UNIT, _V_MAX_UNIT, req.abs_tol, req.rel_tol,
                          req.max_evals).run()
    if req.interval is Interval.FROM_ONE:
        return _integrate_from_one(req)

    def node(v):
        e = 0.5 * math.pi * math.sinh(v)
        x = math.exp(e)
        jac = x * 0.5 * math.pi * math.cosh(v)
        return ((x, x) if req.with_aux else (x,)), jac, x == 0.0

    return _Trapezoid(req.integrand, node, -_V_MAX_EXP, _V_MAX_EXP, req.abs_tol,
                      req.rel_tol, req.max_evals).run()
