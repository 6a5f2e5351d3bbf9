import csv
import io
import json
import math
import subprocess
import sys

import pytest

from twistjones.cli import SWEEP_HEADER, grid, main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_grid_is_inclusive():
    g = grid(0.0, math.pi, math.pi / 4)
    assert len(g) == 5 and g[-1] == pytest.approx(math.pi)
    assert parse_range("pi/2") == (math.pi / 2, math.pi / 2, 1.0)


def test_derive_text_and_structured(capsys):
    code, out, _ = run(capsys, "derive", "QHQ(vartheta,alpha)")
    assert code == 0 and "eta-grade: 3" in out and "(-i eta^3 / 2)" in out
    code, out, _ = run(capsys, "derive", "H(vartheta)", "--format", "structured")
    payload = json.loads(out)
    assert payload["eta_grade"] == 1 and payload["kind"] == "matrix"


@pytest.mark.parametrize("obj", ["M", "Mtilde", "N", "N(vartheta)", "Q(alpha)", "S(alpha)",
                                 "K(alpha)", "VCR", "h1", "h2", "Q(vartheta) H(2*vartheta) Q(vartheta)"])
def test_derive_objects(capsys, obj):
    code, out, _ = run(capsys, "derive", obj)
    assert code == 0 and out


def test_derive_documented_examples(capsys):
    code, out, _ = run(capsys, "derive", "H(0)", "--format", "structured")
    from twistjones.jones import Matrix2, pauli_x
    from twistjones.symphase import DEFAULT_CONTEXT as CTX
    assert Matrix2.from_records(CTX, json.loads(out)["records"]) == pauli_x() * (CTX.eta() * -1j)
    code, out, _ = run(capsys, "derive", "QHQ(vartheta,vartheta)")
    assert "# = (-i eta^3 / 2) *" in out
    code, out, _ = run(capsys, "derive", "N")
    assert "eta" in out and "phi" in out


def test_apply_reports_oam(capsys):
    code, out, _ = run(capsys, "apply", "--op", "H(vartheta)", "--state", "L")
    assert code == 0 and "R     +2  eta" in out


def test_phase_numeric(capsys):
    code, out, _ = run(capsys, "phase", "--op", "VCR", "--state", "L", "--at", "vartheta=0.3",
                       "--eta-model", "const:2", "--format", "structured")
    d = json.loads(out)
    assert code == 0 and d["magnitude"] == pytest.approx(4.0)


def test_concurrence_side_by_side(capsys):
    code, out, _ = run(capsys, "concurrence", "--state", "h1", "--at", "vartheta=pi/4",
                       "theta=pi/2", "--format", "structured")
    s = json.loads(out)["strategies"]
    assert code == 0
    assert s["sum_alpha2_abs"] == pytest.approx(0.5)
    assert s["closed_form_re"] == pytest.approx(1.0)


def test_cascade(capsys):
    code, out, _ = run(capsys, "cascade", "-n", "3", "--at", "vartheta=0.2", "theta=1",
                       "--format", "structured")
    d = json.loads(out)
    assert code == 0 and len(d["elements"]) == 3 and d["elements"][2]["engine_only"]
    assert "array_factor_peak" in d


def test_sweep_csv(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--theta", "pi/2", "--vartheta", "0:pi:pi/4", "--out", str(out))
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert code == 0 and rows[0] == SWEEP_HEADER and len(rows) == 6
    assert float(rows[1][3]) == 0.5 and float(rows[2][3]) == 1.0
    assert float(rows[1][4]) == 0.375


def test_sweep_eta_two_point(capsys):
    code, out, _ = run(capsys, "sweep", "--theta", "pi/6", "--vartheta", "0")
    row = list(csv.reader(io.StringIO(out)))[1]
    assert float(row[2]) == pytest.approx(2.0, abs=1e-12)
    assert float(row[3]) == pytest.approx(32.0, rel=1e-12)
    assert float(row[5]) == 0.0


@pytest.mark.parametrize("conv", ["default", "twist=+1,j=-i,hand=+", "twist=-1,j=-i,hand=-"])
def test_sweep_fields_finite_for_every_convention(capsys, conv):
    code, out, _ = run(capsys, "sweep", "--theta", "0.05:pi-0.05:0.5", "--vartheta", "0:pi:0.3",
                       "--convention", conv)
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert code == 0 and all(math.isfinite(float(x)) for r in rows for x in r)


def test_sweep_strategy_and_element_subsets(capsys):
    code, out, _ = run(capsys, "sweep", "--theta", "1", "--vartheta", "0", "--elements", "1",
                       "--strategies", "iconc")
    hdr, row = list(csv.reader(io.StringIO(out)))
    filled = {h for h, v in zip(hdr, row) if v}
    assert code == 0 and filled == {"theta", "vartheta", "eta", "C_iconc_h1"}


def test_sweep_row_order_theta_outer(capsys):
    code, out, _ = run(capsys, "sweep", "--theta", "1:2:1", "--vartheta", "0:0.2:0.1")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert [(float(r[0]), float(r[1])) for r in rows][:3] == [(1.0, 0.0), (1.0, 0.1), (1.0, 0.2)]
    assert float(rows[3][0]) == 2.0


def test_audit_formats(capsys):
    code, out, _ = run(capsys, "audit", "--samples", "50", "--format", "structured")
    assert code == 0 and len(json.loads(out)) >= 14
    code, out, _ = run(capsys, "audit", "--samples", "50")
    assert code == 0 and "structural-mismatch" in out and not out.startswith("target,")


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["derive", "nonsense("],
    ["sweep", "--theta", "0:1:0.1"],
    ["sweep", "--vartheta", "1:0:0.1"],
    ["concurrence", "--state", "h1"],
    ["phase", "--op", "VCR", "--state", "L", "--eta-model", "const:1"],
    ["sweep", "--eta-model", "const:-1"],
    ["apply", "--op", "H(vartheta)", "--state", "x"],
    ["sweep", "--theta", "1", "--vartheta", "0", "--out", "/nonexistent-dir/x.csv"],
    ["sweep", "--elements", "3"],
    ["sweep", "--strategies", "bogus"],
    ["sweep", "--format", "structured"],
])
def test_errors_are_one_line_and_nonzero(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code != 0 and err.startswith("error:") and err.count("\n") == 1


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "twistjones", "derive", "S(alpha)"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "cos(alpha)" in p.stdout
