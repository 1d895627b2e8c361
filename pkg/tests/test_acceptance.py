"""Acceptance criteria at their stated tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line (visible in ``pytest -v``
output) and then asserts.  Criteria are implemented as stated; none is
relaxed to make it pass.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from hilbert_spectra.hilbert_core import (
    PowerSeries,
    eigen_relation_residual,
    eigenfunction_eval,
    hill_sequence,
    hill_sequence_alternating,
)
from hilbert_spectra.mehler_fock import (
    PhiZ,
    kernel_identity_residual,
    mf_round_trip,
    transform_representation_residual,
)
from hilbert_spectra.spectral import (
    SpectralMeasure,
    multiplier_convergence,
    multiplier_identity_residual,
    multiplier_psi,
    orthogonality_integral,
    pushforward_moment,
    spectral_measure_density,
    weight_w,
)

MULTIPLIER_SCHEDULE = [int(n) for n in np.unique(np.round(np.geomspace(100, 10**4, 25)))]


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_eigen_relation(verdict):
    worst = 0.0
    for mu in (0.5, 0.3, complex(0.5, 0.5), complex(0.5, 1.0)):
        for z in (0.0, 0.2, 0.5, -0.4, complex(0.3, 0.3)):
            scaled = eigen_relation_residual(mu, z) / (1.0 + abs(eigenfunction_eval(mu, z)))
            worst = max(worst, scaled)
    verdict(1, "eigen relation via integral form", worst <= 1e-7,
            f"max scaled residual {worst:.3e} (tol 1e-7)")


def test_criterion_02_kernel_identity(verdict):
    low = max(kernel_identity_residual(t, y) for t in (0.0, 0.5, 1.0) for y in (1.0, 2.0, 5.0))
    high = max(kernel_identity_residual(2.0, y) for y in (1.0, 2.0, 5.0))
    verdict(2, "conical kernel identity", low <= 1e-7 and high <= 1e-6,
            f"t<=1: {low:.3e} (tol 1e-7); t=2: {high:.3e} (tol 1e-6)")


def test_criterion_03_transform_representation(verdict):
    zs = (0.0, 0.4, -0.4, 0.5j, complex(0.3, 0.3))
    worst = max(transform_representation_residual(t, z)
                for t in (0.0, 0.5, 1.0, 2.0) for z in zs)
    verdict(3, "eigenfunction from Mehler-Fock transform", worst <= 1e-6,
            f"max residual {worst:.3e} (tol 1e-6)")


def test_criterion_04_hill_routes(verdict):
    worst = 0.0
    for mu in (0.5, 0.3, complex(0.5, 1.0)):
        exact = hill_sequence_alternating(mu, 30)
        fast = hill_sequence(mu, 30, check=False)
        worst = max(worst, float(np.max(np.abs(exact - fast) / np.abs(exact))))
    x = hill_sequence(0.5, 1)
    closed = max(abs(x[0] - math.pi), abs(x[1] - 0.75 * math.pi))
    verdict(4, "Hill sequence routes and closed values", worst <= 1e-8 and closed <= 1e-12,
            f"route mismatch {worst:.3e} (tol 1e-8); closed values {closed:.3e} (tol 1e-12)")


def test_criterion_05_not_square_summable(verdict):
    x = hill_sequence(0.5, 4 * 640)
    s = np.cumsum(np.abs(x) ** 2)
    ratios = [float(s[4 * n] / s[n]) for n in (10, 40, 160, 640)]
    verdict(5, "partial sums keep growing", all(r > 1.05 for r in ratios),
            "S_4N/S_N = " + ", ".join(f"{r:.4f}" for r in ratios) + " (need > 1.05)")


def test_criterion_06_multiplier_identity(verdict):
    raw, slopes = [], []
    for k in range(3):
        f = PowerSeries.monomial(k)
        for t in (0.0, 0.5, 1.0):
            raw.append(multiplier_identity_residual(f, t, 10**4))
            slopes.append(multiplier_convergence(f, t, MULTIPLIER_SCHEDULE).slope)
    worst_slope = max(abs(p + 0.5) for p in slopes)
    ok = max(raw) <= 1e-4 and worst_slope <= 0.15
    verdict(6, "multiplier identity at N=1e4", ok,
            f"max residual {max(raw):.3e} (tol 1e-4); slopes "
            f"{min(slopes):.3f}..{max(slopes):.3f} (need -0.5 +- 0.15)")


def test_criterion_07_orthogonality(verdict):
    n_max = 10
    table = {(n, m): orthogonality_integral(n, m, weight=weight_w)
             for m in range(n_max + 1) for n in range(m + 1)}
    diag = np.array([table[n, n] for n in range(n_max + 1)])
    off = max(abs(table[n, m]) for m in range(n_max + 1) for n in range(m))
    spread = float((diag.max() - diag.min()) / diag.mean())
    i00 = abs(diag[0] - math.pi)
    ok = off <= 1e-6 * diag[0] and spread <= 1e-4 and i00 <= 1e-8
    verdict(7, "orthogonality under w(t)", ok,
            f"max |I_nm|/I_00 {off / diag[0]:.3e} (tol 1e-6); diagonal spread {spread:.3e} "
            f"(tol 1e-4); |I_00 - pi| {i00:.3e} (tol 1e-8)")


def test_criterion_08_spectrum_and_measure(verdict):
    measure = SpectralMeasure()
    mass_err = abs(measure.mass() - 1.0)
    at_pi = spectral_measure_density(math.pi)
    moments = {}
    for name, g in (("1", lambda x: 1.0), ("x", lambda x: x), ("x^2", lambda x: x * x)):
        lhs = measure.moment(g)
        rhs = pushforward_moment(g, weight=weight_w, scale=1.0 / math.pi)
        moments[name] = abs(lhs - rhs)
    ts = np.linspace(0.0, 12.0, 2001)
    psi = np.array([multiplier_psi(t) for t in ts])
    monotone = bool(np.all(np.diff(psi) < 0))
    endpoints = psi[0] == math.pi and multiplier_psi(40.0) <= 1e-12
    ok = (at_pi == 0.0 and mass_err <= 1e-8 and max(moments.values()) <= 1e-6
          and monotone and endpoints)
    verdict(8, "spectrum [0, pi] and measure dr", ok,
            f"density(pi)={at_pi}; |mass-1| {mass_err:.3e} (tol 1e-8); pushforward "
            + ", ".join(f"g={k}: {v:.3e}" for k, v in moments.items())
            + f" (tol 1e-6); monotone={monotone}; endpoints={endpoints}")


def test_criterion_09_round_trip(verdict):
    xs = (1.2, 2.0, 5.0)
    worst = 0.0
    for z in (0.0, 0.3, -0.5):
        phi = PhiZ(z)
        got = mf_round_trip(phi, xs, tol=1e-8)
        worst = max(worst, max(abs(got[x] - phi(x)) for x in xs))
    verdict(9, "Mehler-Fock round trip", worst <= 1e-4, f"max error {worst:.3e} (tol 1e-4)")


def test_criterion_10_determinism(verdict):
    cmd = [sys.executable, "-m", "hilbert_spectra", "verify", "--suite", "all"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    same = first.stdout == second.stdout and len(first.stdout) > 0
    verdict(10, "verify --suite all is byte-identical across runs", same,
            f"{len(first.stdout)} bytes, identical={same}, exit codes "
            f"{first.returncode}/{second.returncode}")
