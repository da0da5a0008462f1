import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from truncated_fourier.cli import (
    RunConfig,
    build_parser,
    config_from_args,
    eigenfunction_dump,
    format_float,
    main,
    parse_grid,
    run,
)
from truncated_fourier.fourier_spectrum import spectrum_table
from truncated_fourier.legendre import legendre_eval


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code, "", ""
    code = run(config_from_args(ns), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_spectrum_csv_columns():
    code, out, _ = invoke(["spectrum", "--a", "2", "--k-max", "10", "--oracle"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "gamma", "mu", "sigma", "lambda_re", "lambda_im", "sigma_oracle"]
    assert len(rows) == 12
    sig = np.array([float(r[3]) for r in rows[1:]])
    oracle = np.array([float(r[6]) for r in rows[1:]])
    assert np.max(np.abs(sig - oracle)) <= 1e-8
    assert "\r" not in out


def test_trace_json_itz_bound():
    code, out, _ = invoke(["trace", "--a", "1"])
    assert code == 0
    rep = json.loads(out)
    assert rep["itz_bound"] == 1.0
    assert rep["itz_ok"] is True


def test_net_json_has_verdict():
    code, out, _ = invoke(["net", "--a", "8", "--kappa", "0.35", "--domain", "cross", "--k-max", "80"])
    assert code == 0
    rep = json.loads(out)
    assert "is_net" in rep and isinstance(rep["is_net"], bool)


def test_json_round_trip_is_lossless():
    code, out, _ = invoke(["spectrum", "--a", "1.3", "--k-max", "6", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    table = spectrum_table(1.3, 6)
    assert [e["sigma"] for e in rep["entries"]] == table.sigma.tolist()
    assert [e["gamma"] for e in rep["entries"]] == table.gamma.tolist()


def test_format_float_17_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(math.pi)) == math.pi
    assert format_float(-0.0) == "0"


def test_output_is_deterministic(tmp_path):
    argv = ["plunge", "--a-grid", "2:4:1", "--epsilon", "0.1", "--format", "json"]
    outputs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(argv + ["--output", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    records = json.loads(outputs[0])
    assert [r["a"] for r in records] == [2.0, 3.0, 4.0]
    assert all(r["bounds_hold"] for r in records)


def test_a_grid_parsing():
    assert parse_grid("2:8:2") == (2.0, 4.0, 6.0, 8.0)
    assert parse_grid("0.1:0.3:0.1") == (0.1, 0.2, 0.3)


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--a", "-1"],
        ["spectrum"],
        ["plunge", "--a", "2", "--epsilon", "0.7"],
        ["net", "--a", "2", "--kappa", "0"],
        ["slepian", "--a", "0.4", "--k", "1"],
        ["spectrum", "--a", "2", "--k-max", "-3"],
        ["frobnicate", "--a", "2"],
        ["net", "--a", "2", "--kappa", "0.1", "--domain", "disc"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, _, _ = invoke(argv)
    assert code == 2


def test_computation_failure_exit_1(monkeypatch):
    monkeypatch.setenv("PROLATE_MAX_N", "8")
    code, out, err = invoke(["spectrum", "--a", "6", "--k-max", "4"])
    assert code == 1
    assert out == ""
    assert "ConvergenceError" in err


def test_precondition_failure_exit_1():
    code, _, err = invoke(["trace", "--a", "4", "--k-max", "5"])
    assert code == 1
    assert "PreconditionError" in err


def test_eigenfunction_legendre_limit():
    rows = eigenfunction_dump(0.0, 2, 5)
    t = np.array([r[0] for r in rows])
    assert t.tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert np.allclose([r[1] for r in rows], legendre_eval(2, t), atol=1e-14)


def test_eigenfunction_columns_identical():
    for row in eigenfunction_dump(2.3, 3, 41):
        assert abs(row[1] - row[2]) <= 1e-14


def test_eigenfunction_odd_vanishes_at_zero():
    code, out, _ = invoke(["eigenfunction", "--a", "1", "--k", "1", "--grid-size", "11"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "g", "e"]
    mid = rows[1:][5]
    assert float(mid[0]) == 0.0 and float(mid[1]) == 0.0


def test_asymptotics_and_slepian_commands():
    code, out, _ = invoke(["asymptotics", "--a", "2.5", "--regime", "large_a_deficit", "--k-max", "0"])
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert 0.8 <= row["ratio"] <= 1.25
    code, out, _ = invoke(["slepian", "--a", "6", "--b", "0", "--form", "coupled"])
    assert code == 0
    rec = json.loads(out)
    assert rec["k"] == 22 and abs(rec["sigma_predicted"] - rec["sigma_computed"]) < 0.15


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "truncated_fourier", "trace", "--a", "1", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    header, values = proc.stdout.strip().split("\n")
    assert "itz_bound" in header.split(",")


def test_run_config_direct():
    out = io.StringIO()
    assert run(RunConfig(command="spectrum", a=1.0, k_max=2), stdout=out, stderr=io.StringIO()) == 0
    assert out.getvalue().startswith("k,gamma,mu,sigma")
