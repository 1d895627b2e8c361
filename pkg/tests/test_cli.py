import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hilbert_spectra.cli import main
from hilbert_spectra.report import ResidualItem, ResidualReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestReport:
    @pytest.mark.parametrize("residual,tol,verdict", [
        (1e-9, 1e-8, "pass"), (1e-8, 1e-8, "pass"), (2e-8, 1e-8, "fail"),
        (math.nan, 1.0, "fail"), (math.inf, 1.0, "fail"),
    ])
    def test_verdict(self, residual, tol, verdict):
        assert ResidualItem("x", "a", residual, tol).verdict == verdict

    def test_serialization_is_stable(self):
        def build():
            r = ResidualReport(metadata={"z": 1, "a": [1, 2]})
            r.add("first", "anchor", 0.1, 1.0)
            r.add("second", "anchor", 2.0, 1.0)
            return r
        assert build().to_json() == build().to_json()
        doc = json.loads(build().to_json())
        assert doc["summary"] == {"failed": 1, "passed": 1, "total": 2}
        assert [i["name"] for i in doc["items"]] == ["first", "second"]
        rows = list(csv.DictReader(io.StringIO(build().to_csv())))
        assert rows[1]["verdict"] == "fail"
        assert float(rows[0]["residual"]) == 0.1


class TestCommands:
    def test_eig_seq(self, capsys):
        code, out, _ = run(capsys, "eig-seq", "--mu", "0.5", "--n", "2")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert rows[0]["x"]["re"] == pytest.approx(math.pi, rel=1e-15)
        assert rows[1]["x"]["re"] == pytest.approx(0.75 * math.pi, rel=1e-15)
        assert rows[0]["x"]["im"] == 0

    def test_eig_seq_alternating_csv(self, capsys):
        code, out, _ = run(capsys, "eig-seq", "--mu", "0.5+1i", "--n", "3", "--route",
                           "alternating", "--format", "csv")
        assert code == 0
        header, first = out.splitlines()[:2]
        assert header == "n,x_re,x_im"
        assert float(first.split(",")[1]) == pytest.approx(math.pi / math.cosh(math.pi))

    def test_eig_eval(self, capsys):
        code, out, _ = run(capsys, "eig-eval", "--mu", "0.5", "--z-re", "0", "--z-im", "0")
        row = json.loads(out)["rows"][0]
        assert code == 0 and row["f"]["re"] == pytest.approx(1.0)
        assert row["eigenvalue"]["re"] == pytest.approx(math.pi)

    def test_apply(self, capsys):
        code, out, _ = run(capsys, "apply", "--coeffs", "1,1", "--n", "2")
        rows = json.loads(out)["rows"]
        assert code == 0 and rows[0]["b"]["re"] == 1.5

    def test_mf(self, capsys):
        code, out, _ = run(capsys, "mf", "--t", "0,1", "--z-re", "0")
        rows = json.loads(out)["rows"]
        assert code == 0
        assert rows[0]["transform"]["re"] == pytest.approx(math.pi, abs=1e-10)
        assert rows[1]["transform"]["re"] == pytest.approx(math.pi / math.cosh(math.pi), abs=1e-10)

    def test_imf(self, capsys):
        code, out, _ = run(capsys, "imf", "--x", "2", "--z-re", "0", "--tol", "1e-6")
        row = json.loads(out)["rows"][0]
        assert code == 0 and row["error"] <= 1e-4

    def test_kernel_check(self, capsys):
        code, out, _ = run(capsys, "kernel-check", "--t", "0,0.5", "--y", "1,2",
                           "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 4
        assert all(float(r["residual"]) <= 1e-7 for r in rows)

    def test_measure(self, capsys):
        code, out, _ = run(capsys, "measure", "--grid", "100")
        doc = json.loads(out)
        assert code == 0 and len(doc["rows"]) == 100
        assert doc["metadata"]["mass"] == pytest.approx(1.0, abs=1e-8)
        assert doc["rows"][-1]["density"] == 0.0

    def test_spectrum(self, capsys):
        code, out, _ = run(capsys, "spectrum")
        assert code == 0 and json.loads(out)["summary"]["failed"] == 0

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "seq.json"
        code, out, _ = run(capsys, "eig-seq", "--mu", "0.3", "--n", "4", "--out", str(target))
        assert code == 0 and out == ""
        assert len(json.loads(target.read_text())["rows"]) == 5


class TestPlotData:
    def test_multiplier(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--kind", "multiplier", "--nodes", "50",
                           "--t-max", "3")
        psi = [r["psi"] for r in json.loads(out)["rows"]]
        assert code == 0 and len(psi) == 50 and psi[0] == math.pi
        assert all(a > b for a, b in zip(psi, psi[1:]))

    def test_density(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--kind", "density", "--nodes", "100",
                           "--format", "csv")
        values = [float(r["density"]) for r in csv.DictReader(io.StringIO(out))]
        assert code == 0 and len(values) == 100
        assert min(values) >= 0 and values[-1] == 0

    def test_eigenfunction(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--kind", "eigenfunction", "--mu", "0.5")
        values = [r["f"] for r in json.loads(out)["rows"]]
        assert code == 0
        assert all(v["re"] > 0 and math.isfinite(v["re"]) and abs(v["im"]) < 1e-12
                   for v in values)

    def test_kernel(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--kind", "kernel", "--t", "1", "--nodes", "5")
        rows = json.loads(out)["rows"]
        assert code == 0 and rows[0]["kernel"] == 1.0


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        [],
        ["eig-seq", "--n", "2"],
        ["eig-seq", "--mu", "abc", "--n", "2"],
        ["eig-seq", "--mu", "0.9", "--n", "2"],
        ["eig-seq", "--mu", "0.5", "--n", "-1"],
        ["measure", "--grid", "0"],
        ["verify", "--suite", "nope"],
        ["verify", "--tol", "-1"],
        ["eig-eval", "--mu", "0.5", "--z-re", "1.0"],
        ["nonsense"],
    ])
    def test_usage(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err

    def test_numeric_failure(self, capsys):
        code, _, err = run(capsys, "imf", "--x", "2", "--z-re", "0.95", "--tol", "1e-14")
        assert code == 1 and "numerical failure" in err

    def test_bad_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("HILBERT_SPECTRA_TOL", "zero")
        code, _, err = run(capsys, "verify", "--suite", "core")
        assert code == 2 and "HILBERT_SPECTRA_TOL" in err

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "hilbert_spectra", "eig-seq", "--mu",
                               "0.5", "--n", "1", "--format", "csv"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.startswith("n,x_re,x_im")


class TestVerify:
    def test_core_passes_and_is_deterministic(self, capsys):
        code1, out1, _ = run(capsys, "verify", "--suite", "core")
        code2, out2, _ = run(capsys, "verify", "--suite", "core")
        assert code1 == code2 == 0
        assert out1 == out2
        assert "timestamp" not in json.loads(out1)["metadata"]

    def test_exit_code_tracks_verdicts(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "spectral")
        doc = json.loads(out)
        all_pass = all(i["verdict"] == "pass" for i in doc["items"])
        assert code == (0 if all_pass else 1)

    def test_env_override_only_tunable(self, capsys, monkeypatch):
        monkeypatch.setenv("HILBERT_SPECTRA_TOL", "1e-20")
        code, out, _ = run(capsys, "verify", "--suite", "core")
        items = {i["name"]: i for i in json.loads(out)["items"]}
        assert items["eigen relation mu=0.5"]["tolerance"] == 1e-20
        assert items["Hill x_0(1/2) = pi"]["tolerance"] == 1e-12
        assert code == (0 if all(i["verdict"] == "pass" for i in items.values()) else 1)

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("HILBERT_SPECTRA_TOL", "1e-20")
        _, out, _ = run(capsys, "verify", "--suite", "core", "--tol", "1e-6")
        meta = json.loads(out)["metadata"]
        assert meta["tolerance_override"] == 1e-6

    def test_timestamp_opt_in(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "core", "--timestamp")
        assert "timestamp" in json.loads(out)["metadata"]

    def test_csv(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "core", "--format", "csv")
        assert out.splitlines()[0] == "name,anchor,residual,tolerance,verdict"
