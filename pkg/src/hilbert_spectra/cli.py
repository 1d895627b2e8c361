"""Command-line interface: ``hilbert-spectra <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure or numerical error, 2 usage
error.  Output is JSON (default) or CSV, to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .errors import DomainError, HilbertSpectraError
from .hilbert_core import (
    PowerSeries,
    apply_hilbert_series,
    eigenfunction_eval,
    eigenvalue,
    hill_sequence,
    hill_sequence_alternating,
)
from .mehler_fock import PhiZ, kernel_identity_residual, mf_forward, mf_inverse
from .report import ResidualReport
from .special_functions import conical_p
from .spectral import (
    SpectralMeasure,
    multiplier_psi,
    spectral_measure_density,
    spectrum_report,
)
from .verify import SUITES, run_suite

TOL_ENV = "HILBERT_SPECTRA_TOL"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Table:
    """Rows of named columns; complex cells become ``{"re", "im"}`` in JSON
    and ``<col>_re, <col>_im`` pairs in CSV."""

    def __init__(self, columns: Sequence[str], rows: List[Sequence], metadata=None):
        self.columns = list(columns)
        self.rows = rows
        self.metadata = metadata or {}

    @staticmethod
    def _json_cell(value):
        if isinstance(value, (complex, np.complexfloating)):
            return {"re": float(value.real), "im": float(value.imag)}
        if isinstance(value, np.floating):
            return float(value)
        return value

    def to_json(self) -> str:
        doc = {
            "columns": self.columns,
            "metadata": self.metadata,
            "rows": [{c: self._json_cell(v) for c, v in zip(self.columns, row)}
                     for row in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        complex_cols = {
            i for i in range(len(self.columns))
            if any(isinstance(r[i], (complex, np.complexfloating)) for r in self.rows)
        }
        header = []
        for i, c in enumerate(self.columns):
            header.extend([f"{c}_re", f"{c}_im"] if i in complex_cols else [c])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in self.rows:
            out = []
            for i, v in enumerate(row):
                if i in complex_cols:
                    v = complex(v)
                    out.extend([repr(v.real), repr(v.imag)])
                else:
                    out.append(repr(float(v)) if isinstance(v, (float, np.floating)) else v)
            writer.writerow(out)
        return buf.getvalue()


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return value


def _float_list(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _env_tol() -> Optional[float]:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return None
    try:
        return _positive_float(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{TOL_ENV}: {exc}")


def _z(args) -> complex:
    return complex(args.z_re, args.z_im)


def _cmd_eig_seq(args):
    route = hill_sequence_alternating if args.route == "alternating" else hill_sequence
    x = route(args.mu, args.n)
    return Table(["n", "x"], [(n, complex(v)) for n, v in enumerate(x)],
                 {"mu": Table._json_cell(args.mu), "route": args.route})


def _cmd_eig_eval(args):
    z = _z(args)
    return Table(["z", "f", "eigenvalue"],
                 [(z, eigenfunction_eval(args.mu, z), complex(eigenvalue(args.mu)))],
                 {"mu": Table._json_cell(args.mu)})


def _cmd_apply(args):
    b = apply_hilbert_series(PowerSeries(args.coeffs), args.n)
    return Table(["n", "b"], [(n, complex(v)) for n, v in enumerate(b.coeffs)],
                 {"input": list(args.coeffs)})


def _cmd_mf(args):
    phi = PhiZ(_z(args))
    tol = args.tol if args.tol is not None else (_env_tol() or 1e-12)
    ts = args.t if args.t else [0.0]
    return Table(["t", "transform"], [(t, complex(mf_forward(phi, t, tol=tol))) for t in ts],
                 {"z": Table._json_cell(_z(args)), "tol": tol})


def _cmd_imf(args):
    phi = PhiZ(_z(args))
    tol = args.tol if args.tol is not None else (_env_tol() or 1e-8)
    cache = {}

    def fhat(t):
        if t not in cache:
            cache[t] = mf_forward(phi, t, tol=min(1e-11, tol / 100))
        return cache[t]

    rows = []
    for x in args.x:
        value = complex(mf_inverse(fhat, x, tol=tol))
        rows.append((x, value, complex(phi(x)), abs(value - phi(x))))
    return Table(["x", "recovered", "exact", "error"], rows,
                 {"z": Table._json_cell(_z(args)), "tol": tol})


def _cmd_kernel_check(args):
    rows = [(t, y, kernel_identity_residual(t, y)) for t in args.t for y in args.y]
    return Table(["t", "y", "residual"], rows)


def _cmd_measure(args):
    n = args.grid
    xs = [math.pi * k / n for k in range(1, n + 1)]
    mass = SpectralMeasure().mass()
    return Table(["x", "density"], [(x, spectral_measure_density(x)) for x in xs],
                 {"grid": n, "mass": mass})


def _cmd_plot_data(args):
    n = args.nodes
    if args.kind == "multiplier":
        ts = np.linspace(0.0, args.t_max, n)
        return Table(["t", "psi"], [(float(t), multiplier_psi(t)) for t in ts])
    if args.kind == "density":
        xs = [math.pi * k / n for k in range(1, n + 1)]
        return Table(["x", "density"], [(x, spectral_measure_density(x)) for x in xs])
    if args.kind == "eigenfunction":
        zs = np.linspace(0.0, args.z_max, n)
        return Table(["z", "f"], [(float(z), complex(eigenfunction_eval(args.mu, z)))
                                  for z in zs], {"mu": Table._json_cell(args.mu)})
    # kernel: conical function P_{it-1/2}(x) on [1, x_max]
    xs = np.linspace(1.0, args.x_max, n)
    t = args.t[0] if args.t else 0.0
    return Table(["x", "kernel"], [(float(x), conical_p(t, x)) for x in xs], {"t": t})


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbert-spectra",
                                     description="Spectral computations for the Hilbert matrix.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("eig-seq", "Hill's latent eigensequence x_0..x_n")
    p.add_argument("--mu", type=_parse_complex, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--route", choices=("cauchy", "alternating"), default="cauchy")
    p.set_defaults(func=_cmd_eig_seq)

    p = add("eig-eval", "latent eigenfunction f_mu(z)")
    p.add_argument("--mu", type=_parse_complex, required=True)
    p.add_argument("--z-re", type=float, required=True)
    p.add_argument("--z-im", type=float, default=0.0)
    p.set_defaults(func=_cmd_eig_eval)

    p = add("apply", "apply the Hilbert matrix to Taylor coefficients")
    p.add_argument("--coeffs", type=_float_list, required=True)
    p.add_argument("--n", type=int, required=True, help="number of output coefficients")
    p.set_defaults(func=_cmd_apply)

    p = add("mf", "Mehler-Fock transform of phi_z")
    p.add_argument("--t", type=_float_list, help="comma-separated t values (default 0)")
    p.add_argument("--z-re", type=float, required=True)
    p.add_argument("--z-im", type=float, default=0.0)
    p.add_argument("--tol", type=_positive_float)
    p.set_defaults(func=_cmd_mf)

    p = add("imf", "inverse transform of the transform of phi_z")
    p.add_argument("--x", type=_float_list, required=True)
    p.add_argument("--z-re", type=float, required=True)
    p.add_argument("--z-im", type=float, default=0.0)
    p.add_argument("--tol", type=_positive_float)
    p.set_defaults(func=_cmd_imf)

    p = add("kernel-check", "conical kernel identity residuals")
    p.add_argument("--t", type=_float_list, required=True)
    p.add_argument("--y", type=_float_list, required=True)
    p.set_defaults(func=_cmd_kernel_check)

    p = add("verify", "run a verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--tol", type=_positive_float,
                   help=f"override tunable tolerances (also via {TOL_ENV})")
    p.add_argument("--timestamp", action="store_true",
                   help="record the wall-clock time (breaks byte-identical output)")
    p.set_defaults(func=None)

    p = add("measure", "spectral measure density on a grid")
    p.add_argument("--grid", type=int, default=100)
    p.set_defaults(func=_cmd_measure)

    p = add("spectrum", "spectrum and measure checks")
    p.set_defaults(func=None)

    p = add("plot-data", "tables for plotting")
    p.add_argument("--kind", choices=("eigenfunction", "kernel", "density", "multiplier"),
                   required=True)
    p.add_argument("--nodes", type=int, default=50)
    p.add_argument("--mu", type=_parse_complex, default=complex(0.5))
    p.add_argument("--t", type=_float_list)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--z-max", type=float, default=0.9)
    p.add_argument("--x-max", type=float, default=10.0)
    p.set_defaults(func=_cmd_plot_data)
    return parser


def _check_counts(args) -> None:
    for name in ("n", "grid", "nodes"):
        value = getattr(args, name, None)
        if value is not None and value < (0 if name == "n" else 1):
            raise UsageError(f"--{name} must be {'>= 0' if name == 'n' else '>= 1'}, got {value}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_report(args) -> ResidualReport:
    if args.command == "spectrum":
        report = spectrum_report()
        report.metadata = {"tool": "hilbert-spectra", "version": __version__}
        return report
    tol = args.tol if args.tol is not None else _env_tol()
    stamp = None
    if args.timestamp:
        from datetime import datetime, timezone
        stamp = datetime.now(timezone.utc).isoformat()
    return run_suite(args.suite, tol=tol, timestamp=stamp)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        _check_counts(args)
        if args.func is None:
            report = _run_report(args)
            _emit(report.to_json() if args.format == "json" else report.to_csv(), args.out)
            for line in report.summary_lines():
                if line.startswith("[FAIL]"):
                    print(line, file=sys.stderr)
            return EXIT_OK if report.all_passed else EXIT_FAIL
        table = args.func(args)
        _emit(table.to_json() if args.format == "json" else table.to_csv(), args.out)
        return EXIT_OK
    except (UsageError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HilbertSpectraError, ArithmeticError, OverflowError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
