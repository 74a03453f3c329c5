"""Command-line surface: spec ingestion, output formats, exit codes."""

import json
import math
import subprocess
import sys

import pytest

from latconst.cli import main

GAP3_SPEC = {
    "dim": 3,
    "norm": {
        "type": "formmax",
        "rows": [
            [1, 0, 0.5],
            [0, 1, 0.5],
            [2 / 3, 2 / 3, 1 / 3],
            [5 / 6, 5 / 6, 0],
        ],
    },
}

L1_3_SPEC = {"dim": 3, "norm": {"type": "lp", "p": 1}}
L1_2_SPEC = {"dim": 2, "norm": {"type": "lp", "p": 1}}
L2_2_SPEC = {"dim": 2, "norm": {"type": "lp", "p": 2}}
LINF_3_SPEC = {"dim": 3, "norm": {"type": "lp", "p": "inf"}}


def write_spec(tmp_path, spec, name="space.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants_gap3(tmp_path, capsys):
    spec = write_spec(tmp_path, GAP3_SPEC)
    code, out, _ = run_cli(["constants", "--spec", spec], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"space", "results", "certificates", "version"}
    assert doc["results"]["beta"]["estimate"] == pytest.approx(15 / 11, abs=5e-3)
    assert doc["results"]["lambda_plus"]["estimate"] <= 4 / 3 + 5e-3
    assert doc["results"]["chain_ok"] is True
    # every emitted estimate carries its certified interval
    for kind in ("lambda", "lambda_plus", "beta", "alpha", "james"):
        entry = doc["results"][kind]
        assert entry["lower"] <= entry["estimate"] <= entry["upper"]


def test_constants_l1_cube(tmp_path, capsys):
    spec = write_spec(tmp_path, L1_3_SPEC)
    code, out, _ = run_cli(["constants", "--spec", spec], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["lambda_plus"]["estimate"] == pytest.approx(2.0, abs=5e-3)


def test_malformed_spec_exit_codes(tmp_path, capsys):
    bad_row = write_spec(tmp_path, {
        "dim": 2, "norm": {"type": "formmax", "rows": [[1, 0], [0, 0]]}}, "bad1.json")
    assert run_cli(["constants", "--spec", bad_row], capsys)[0] == 2

    not_json = tmp_path / "bad2.json"
    not_json.write_text("{nope")
    assert run_cli(["constants", "--spec", str(not_json)], capsys)[0] == 2

    assert run_cli(["constants", "--spec", str(tmp_path / "missing.json")], capsys)[0] == 2

    # negative coefficients parse but fail the randomized lattice-norm check
    not_lattice = write_spec(tmp_path, {
        "dim": 2, "norm": {"type": "formmax", "rows": [[1, -0.8], [0.5, 1]]}}, "bad3.json")
    code, _, err = run_cli(["constants", "--spec", not_lattice], capsys)
    assert code == 2
    assert "not a lattice norm" in err


def test_budget_exceeded_exit_code(tmp_path, capsys):
    spec = write_spec(tmp_path, L1_3_SPEC)
    code, _, err = run_cli(["constants", "--spec", spec, "--h", "0.002"], capsys)
    assert code == 3
    assert "resolution" in err


def test_moduli_csv(tmp_path, capsys):
    spec = write_spec(tmp_path, L2_2_SPEC)
    code, out, _ = run_cli(
        ["moduli", "--spec", spec, "--eps-grid", "0:1:0.5", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "eps,sigma_lower,sigma_estimate,sigma_upper,delta_lower,delta_estimate,delta_upper"
    assert len(lines) == 4
    rows = {float(ln.split(",")[0]): [float(v) for v in ln.split(",")[1:]] for ln in lines[1:]}
    assert rows[0.0][1] == 0.0
    assert rows[0.5][1] == pytest.approx(math.sqrt(1.25) - 1.0, abs=1e-3)
    assert rows[1.0][1] == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-3)


def test_moduli_json_l1(tmp_path, capsys):
    spec = write_spec(tmp_path, L1_2_SPEC)
    code, out, _ = run_cli(["moduli", "--spec", spec, "--eps-grid", "0.5:0.5:0.1"], capsys)
    assert code == 0
    doc = json.loads(out)
    row = doc["results"]["curve"][0]
    assert row["eps"] == 0.5
    assert row["delta"]["estimate"] == pytest.approx(0.5, abs=1e-3)
    assert row["delta"]["lower"] <= row["delta"]["estimate"] <= row["delta"]["upper"]


def test_verify_spec_reports_ratio_formula_false(tmp_path, capsys):
    spec = write_spec(tmp_path, L1_2_SPEC)
    code, out, err = run_cli(
        ["verify", "--spec", spec, "--eps-grid", "0:1:0.25"], capsys)
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["results"]["checks"]}
    assert 0.5 in by_name["pointwise_ratio_formula"]["details"]["false_points"]
    assert by_name["constant_chain"]["passed"]
    assert "[PASS]" in err


def test_embed_exact_copy(tmp_path, capsys):
    spec = write_spec(tmp_path, LINF_3_SPEC)
    code, out, _ = run_cli(["embed", "--spec", spec], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["sampled_distortion"] == pytest.approx(1.0, abs=1e-9)


def test_embed_no_pair_exit_code(tmp_path, capsys):
    spec = write_spec(tmp_path, L1_2_SPEC)
    code, _, err = run_cli(["embed", "--spec", spec], capsys)
    assert code == 4
    assert "defect" in err


def test_byte_identical_output(tmp_path, capsys):
    spec = write_spec(tmp_path, GAP3_SPEC)
    _, out1, _ = run_cli(["constants", "--spec", spec, "--seed", "3"], capsys)
    _, out2, _ = run_cli(["constants", "--spec", spec, "--seed", "3"], capsys)
    assert out1 == out2


def test_out_file_and_module_invocation(tmp_path):
    spec_path = tmp_path / "space.json"
    spec_path.write_text(json.dumps(L2_2_SPEC))
    out_path = tmp_path / "report.json"
    proc = subprocess.run(
        [sys.executable, "-m", "latconst", "constants",
         "--spec", str(spec_path), "--out", str(out_path)],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    doc = json.loads(out_path.read_text())
    assert doc["results"]["lambda_plus"]["estimate"] == pytest.approx(2 ** 0.5, abs=5e-3)
    assert doc["version"]
