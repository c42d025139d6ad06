import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy.integrate import cumulative_simpson

from energy_backflow import cli
from energy_backflow.errors import NumericsError


def run(*args):
    return cli.main([str(a) for a in args])


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_trace_columns_and_round_trip(tmp_path):
    out = tmp_path / "tr.csv"
    assert run("trace", "--t-max", 10, "--blp", "--out", out) == 0
    header, data = read_csv(out)
    assert header == ["t", "rho00", "theta", "theta_alt", "dq", "f",
                      "rho00_markov", "theta_markov", "a_zz", "b_z", "D_trace"]
    assert data.shape == (1001, 11)
    col = dict(zip(header, data.T))
    dq = cumulative_simpson(col["theta"], x=col["t"], initial=0.0)
    assert np.max(np.abs(dq - col["dq"])) < 1e-9
    assert col["D_trace"][0] == 1.0
    # full precision survives the text round trip
    assert col["theta"][1] == float(open(out).read().splitlines()[2].split(",")[2])


def test_trace_without_blp_and_decoupled(tmp_path):
    out = tmp_path / "tr.csv"
    assert run("trace", "--lambda", 0, "--t-max", 1, "--out", out) == 0
    header, data = read_csv(out)
    assert "D_trace" not in header
    assert len(data) == 101
    assert np.all(data[:, 1] == data[0, 1])


def test_trace_omega0_rescaling(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("trace", "--t-max", 2, "--out", a)
    run("trace", "--t-max", 2, "--omega0", 2, "--out", b)
    _, x = read_csv(a)
    _, y = read_csv(b)
    assert np.allclose(y[:, 0], x[:, 0] / 2)
    assert np.allclose(y[:, 1], x[:, 1])
    assert np.allclose(y[:, 2], 4 * x[:, 2])
    assert np.allclose(y[:, 4], 2 * x[:, 4])
    assert np.allclose(y[:, 8], 2 * x[:, 8])


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"cutoff": 2.0, "bath-temp": 3.0}))
    out = tmp_path / "o.json"

    def meta(*extra):
        assert run("trace", "--t-max", 1, "--format", "json",
                   "--out", out, *extra) == 0
        return json.loads(out.read_text())["meta"]

    m = meta()
    assert (m["cutoff"], m["bath_temp"]) == (0.4, 1.0)
    m = meta("--config", cfg)
    assert (m["cutoff"], m["bath_temp"]) == (2.0, 3.0)
    m = meta("--config", cfg, "--cutoff", 0.7)
    assert (m["cutoff"], m["bath_temp"]) == (0.7, 3.0)


def test_json_trace_body(tmp_path):
    out = tmp_path / "o.json"
    run("trace", "--t-max", 1, "--format", "json", "--out", out)
    body = json.loads(out.read_text())
    assert body["generated_by"].startswith("energy_backflow ")
    assert len(body["columns"]["t"]) == 101


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("trace", "--t-max", 5, "--out", a)
    run("trace", "--t-max", 5, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    m1, m2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
    common = ["blp-map", "--grid", "3x2", "--t-max", 10]
    run(*common, "--jobs", 1, "--out", m1)
    run(*common, "--jobs", 2, "--out", m2)
    assert m1.read_bytes() == m2.read_bytes()
    assert (tmp_path / "m1.json").read_bytes() == (tmp_path / "m2.json").read_bytes()


def test_map_decoupled_and_sidecar(tmp_path):
    out = tmp_path / "bf.csv"
    assert run("backflow-map", "--grid", "2x2", "--lambda", 0,
               "--t-max", 5, "--jobs", 1, "--out", out) == 0
    header, data = read_csv(out)
    assert header == ["omega_c", "T_E", "value"]
    assert data.shape == (4, 3)
    assert np.all(data[:, 2] == 0)
    # row-major: omega varies fastest
    assert list(data[:2, 1]) == [data[0, 1]] * 2
    side = json.loads((tmp_path / "bf.json").read_text())
    assert side["failed_cells"] == []
    assert side["meta"]["measure"] == "backflow"
    assert side["meta"]["grid"]["n_omega"] == 2


def test_resonance_map_with_overlay(tmp_path):
    out = tmp_path / "res.csv"
    assert run("resonance-map", "--resonance-overlay",
               "--out", out) == 0
    _, data = read_csv(out)
    assert data.shape == (2500, 3)
    header, curve = read_csv(tmp_path / "res_resonance.csv")
    assert header == ["T_E", "omega_res"]
    row = curve[np.isclose(curve[:, 0], 1.0)]
    assert abs(row[0, 1] - 6.7077) < 1e-4


def test_map_json_format(tmp_path):
    out = tmp_path / "r.json"
    assert run("resonance-map", "--grid", "3x2", "--format", "json",
               "--out", out) == 0
    body = json.loads(out.read_text())
    assert np.array(body["values"]).shape == (2, 3)
    assert len(body["omega_c"]) == 3


def half_max_time(path):
    _, data = read_csv(path)
    t, norm = data[:, 0], data[:, 2]
    return t[np.argmax(norm < 0.5)]


def test_kernels(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("kernels", "--cutoff", 0.4, "--bath-temp", 5,
               "--out", a) == 0
    run("kernels", "--cutoff", 2, "--bath-temp", 5, "--out", b)
    header, data = read_csv(a)
    assert header == ["t", "D1", "D1_normalized", "D2"]
    assert data[0, 3] == 0.0 and data[0, 2] == 1.0
    assert half_max_time(b) < half_max_time(a)


@pytest.mark.parametrize("args", [
    ["trace", "--dt", 0.03],
    ["trace", "--lambda", -1],
    ["trace", "--format", "xml"],
    ["backflow-map", "--grid", "2by2"],
    ["backflow-map", "--omega-range", "3:1"],
    ["trace", "--config", "/nonexistent.json"],
    ["bogus"],
])
def test_validation_exit_code(tmp_path, capsys, args):
    out = [] if args[0] == "bogus" else ["--out", tmp_path / "x"]
    assert run(*args, *out) == 2
    assert capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"colour": 1}')
    assert run("trace", "--config", cfg) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_numerics_exit_code(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise NumericsError("synthetic")
    monkeypatch.setattr(cli, "propagate", boom)
    assert run("trace", "--out", tmp_path / "x.csv") == 3
    assert "synthetic" in capsys.readouterr().err


def test_stdout_and_module_entry(tmp_path):
    res = subprocess.run([sys.executable, "-m", "energy_backflow", "kernels",
                          "--t-max", "0.1", "--dt", "0.05", "--out", "-"],
                         capture_output=True, text=True, check=True)
    lines = res.stdout.splitlines()
    assert lines[0] == "t,D1,D1_normalized,D2"
    assert len(lines) == 4
