"""Verification suites: every identity checked as a :class:`ResidualReport` item.

Each item has a pinned tolerance.  Items marked *tunable* measure quadrature
accuracy; their tolerance can be overridden (``--tol`` or the
``HILBERT_SPECTRA_TOL`` environment variable).  Structural checks keep their
pinned thresholds.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Optional

import numpy as np

from . import __version__
from .hilbert_core import (
    HILL_CHECK_MAX_N,
    PowerSeries,
    eigen_relation_residual,
    eigenfunction_eval,
    ell2_divergence_probe,
    hill_sequence,
    hill_sequence_alternating,
)
from .mehler_fock import (
    PhiZ,
    general_mu_residual,
    kernel_identity_residual,
    mf_round_trip,
    transform_representation_residual,
)
from .report import ResidualReport
from .spectral import (
    SpectralMeasure,
    gelfand_norm_ratio,
    multiplier_convergence,
    multiplier_identity_residual,
    orthogonality_integral,
    pushforward_moment,
    spectral_weight,
    spectrum_report,
    weight_w,
)

__all__ = ["SUITES", "run_suite"]

EIGEN_MUS = (0.5, 0.3, complex(0.5, 0.5), complex(0.5, 1.0))
EIGEN_ZS = (0.0, 0.2, 0.5, -0.4, complex(0.3, 0.3))
HILL_MUS = (0.5, 0.3, complex(0.5, 1.0))
PROBE_NS = (10, 40, 160, 640)
KERNEL_TS = (0.0, 0.5, 1.0, 2.0)
KERNEL_YS = (1.0, 2.0, 5.0)
REPR_TS = (0.0, 0.5, 1.0, 2.0)
REPR_ZS = (0.0, 0.4, -0.4, 0.5j, complex(0.3, 0.3))
GENERAL_MUS = (0.1, 0.3, 0.5)
ROUND_TRIP_ZS = (0.0, 0.3, -0.5)
ROUND_TRIP_XS = (1.2, 2.0, 5.0)
MULTIPLIER_TS = (0.0, 0.5, 1.0)
MULTIPLIER_N = 10**4
MULTIPLIER_SCHEDULE = tuple(int(n) for n in np.unique(np.round(np.geomspace(100, 10**4, 25))))
ORTHO_N_MAX = 10
MOMENTS: Dict[str, Callable[[float], float]] = {
    "1": lambda x: 1.0,
    "x": lambda x: x,
    "x^2": lambda x: x * x,
}


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}i"


class _Builder:
    def __init__(self, tol_override: Optional[float]):
        self.report = ResidualReport()
        self.tol_override = tol_override

    def add(self, name, anchor, residual, tolerance, *, tunable=False):
        if tunable and self.tol_override is not None:
            tolerance = self.tol_override
        self.report.add(name, anchor, residual, tolerance)


def _core(b: _Builder) -> None:
    for mu in EIGEN_MUS:
        worst = 0.0
        for z in EIGEN_ZS:
            r = eigen_relation_residual(mu, z)
            worst = max(worst, r / (1.0 + abs(eigenfunction_eval(mu, z))))
        b.add(f"eigen relation mu={_fmt(mu)}", "H f_mu = (pi/sin pi mu) f_mu",
              worst, 1e-7, tunable=True)
    for mu in HILL_MUS:
        exact = hill_sequence_alternating(mu, HILL_CHECK_MAX_N)
        fast = hill_sequence(mu, HILL_CHECK_MAX_N, check=False)
        rel = float(np.max(np.abs(exact - fast) / np.abs(exact)))
        b.add(f"Hill sequence two routes mu={_fmt(mu)}", "alternating sum vs Cauchy product",
              rel, 1e-8)
    x = hill_sequence(0.5, 1)
    b.add("Hill x_0(1/2) = pi", "Hill sequence closed values", abs(x[0] - math.pi), 1e-12)
    b.add("Hill x_1(1/2) = 3pi/4", "Hill sequence closed values",
          abs(x[1] - 0.75 * math.pi), 1e-12)
    probe = ell2_divergence_probe(0.5, PROBE_NS)
    shortfall = max(max(0.0, 1.05 - r) for r in probe.ratios)
    b.add("latent sequence not square summable", "S_4N > 1.05 S_N", shortfall, 0.0)


def _mehler_fock(b: _Builder) -> None:
    for t in KERNEL_TS:
        worst = max(kernel_identity_residual(t, y) for y in KERNEL_YS)
        b.add(f"kernel identity t={t:g}", "conical kernel identity", worst,
              1e-6 if t >= 2.0 else 1e-7, tunable=True)
    for t in REPR_TS:
        worst = max(transform_representation_residual(t, z) for z in REPR_ZS)
        b.add(f"eigenfunction via transform t={t:g}", "f_{1/2+it} = cosh(pi t)/pi P phi_z",
              worst, 1e-6, tunable=True)
    for mu in GENERAL_MUS:
        worst = max(general_mu_residual(mu, z) for z in REPR_ZS)
        b.add(f"eigenfunction via Legendre integral mu={mu:g}",
              "f_mu = sin(pi mu)/pi int P_{mu-1} phi_z", worst, 1e-6, tunable=True)
    for z in ROUND_TRIP_ZS:
        phi = PhiZ(z)
        got = mf_round_trip(phi, ROUND_TRIP_XS, tol=1e-8)
        worst = max(abs(got[x] - phi(x)) for x in ROUND_TRIP_XS)
        b.add(f"Mehler-Fock round trip z={z:g}", "inverse of forward transform", worst, 1e-4)


def _spectral(b: _Builder) -> None:
    for k in range(3):
        f = PowerSeries.monomial(k)
        for t in MULTIPLIER_TS:
            raw = multiplier_identity_residual(f, t, MULTIPLIER_N)
            b.add(f"multiplier identity z^{k} t={t:g} N=1e4", "Phi H = psi Phi, truncated",
                  raw, 1e-4)
            conv = multiplier_convergence(f, t, MULTIPLIER_SCHEDULE)
            b.add(f"multiplier slope z^{k} t={t:g}", "truncation error ~ N^-1/2",
                  abs(conv.slope + 0.5), 0.15)
            exact = multiplier_identity_residual(f, t, None)
            b.add(f"multiplier identity z^{k} t={t:g} summed", "Phi H = psi Phi, tail summed",
                  exact, 1e-10, tunable=True)

    for label, weight, i00 in (("w", weight_w, math.pi), ("rho", spectral_weight, 1.0)):
        table = {(n, m): orthogonality_integral(n, m, weight=weight)
                 for m in range(ORTHO_N_MAX + 1) for n in range(m + 1)}
        diag = np.array([table[n, n] for n in range(ORTHO_N_MAX + 1)])
        off = max(abs(table[n, m]) for m in range(ORTHO_N_MAX + 1) for n in range(m))
        b.add(f"orthogonality weight={label}", "I_nm = 0 for n != m", off / diag[0], 1e-6)
        spread = float((diag.max() - diag.min()) / diag.mean())
        b.add(f"constant diagonal weight={label}", "I_nn independent of n", spread, 1e-4)
        b.add(f"I_00 weight={label}", f"I_00 = {'pi' if label == 'w' else '1'}",
              abs(diag[0] - i00), 1e-8, tunable=True)

    measure = SpectralMeasure()
    for name, g in MOMENTS.items():
        lhs = measure.moment(g)
        stated = pushforward_moment(g, weight=weight_w, scale=1.0 / math.pi)
        b.add(f"pushforward g={name} weight=w/pi", "x = pi/cosh(pi t) change of variables",
              abs(lhs - stated), 1e-6)
        image = pushforward_moment(g, weight=spectral_weight)
        b.add(f"pushforward g={name} weight=rho", "x = pi/cosh(pi t) change of variables",
              abs(lhs - image), 1e-6)
    b.report.extend(spectrum_report())

    ratio = gelfand_norm_ratio(PowerSeries([1.0, 0.5, -0.25]))
    b.add("Gelfand map norm ratio is 2", "H2(D) -> H2(C+) rescaling", abs(ratio - 2.0), 1e-10,
          tunable=True)


SUITES: Dict[str, tuple] = {
    "core": (_core,),
    "mehler-fock": (_mehler_fock,),
    "spectral": (_spectral,),
    "all": (_core, _mehler_fock, _spectral),
}


def run_suite(name: str = "all", *, tol: Optional[float] = None,
              timestamp: Optional[str] = None) -> ResidualReport:
    """Run one suite and return its report.

    The report is byte-for-byte reproducible unless a ``timestamp`` is given.
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if tol is not None and not tol > 0:
        raise ValueError("tolerance override must be positive")
    b = _Builder(tol)
    for part in SUITES[name]:
        part(b)
    meta = {
        "tool": "hilbert-spectra",
        "version": __version__,
        "suite": name,
        "tolerance_override": tol,
        "grid": {
            "eigen_relation": {"mu": [_fmt(m) for m in EIGEN_MUS],
                               "z": [_fmt(z) for z in EIGEN_ZS]},
            "kernel": {"t": list(KERNEL_TS), "y": list(KERNEL_YS)},
            "representation": {"t": list(REPR_TS), "z": [_fmt(z) for z in REPR_ZS]},
            "round_trip": {"z": list(ROUND_TRIP_ZS), "x": list(ROUND_TRIP_XS)},
            "multiplier": {"t": list(MULTIPLIER_TS), "N": MULTIPLIER_N},
            "orthogonality_n_max": ORTHO_N_MAX,
        },
    }
    if timestamp is not None:
        meta["timestamp"] = timestamp
    b.report.metadata = meta
    return b.report
