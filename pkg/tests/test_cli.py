import json

import numpy as np
import pytest

from nsghz.cli import (EXIT_CAP, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main,
                       parse_complex_vector, parse_grid, parse_int_range,
                       sweep_tasks)
from nsghz.hypergraph import serialize, star_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def amplitude_rows(text):
    return [line.split() for line in text.splitlines() if not line.startswith("#")]


@pytest.fixture
def star3_file(tmp_path):
    path = tmp_path / "star3.whg"
    path.write_text(serialize(star_graph(3)))
    return str(path)


# -- argument helpers ----------------------------------------------------------------

def test_parse_grid():
    assert parse_grid("0:1:21")[:3] == pytest.approx([0, 0.05, 0.1])
    assert len(parse_grid("0:1:21")) == 21 and parse_grid("0:1:21")[-1] == 1.0
    assert parse_grid("0.1,0.2") == [0.1, 0.2]
    assert parse_grid("0:1:0") == []


def test_parse_int_range_and_vector():
    assert parse_int_range("2:6") == [2, 3, 4, 5, 6]
    assert parse_int_range("3") == [3]
    assert parse_complex_vector("1, 0.5i,-1+2j") == [1, 0.5j, -1 + 2j]


# -- build -----------------------------------------------------------------------------

def test_build_ghz_qubit(capsys):
    code, out, _ = run(capsys, "build", "--ghz", "qubit", "--n", "2", "--alpha", "0.5")
    rows = amplitude_rows(out)
    assert code == EXIT_PASS and len(rows) == 2
    assert [r[1] for r in rows] == ["00", "11"]
    for r in rows:
        assert abs(complex(float(r[2]), float(r[3]))) == pytest.approx(2 ** -0.5, abs=1e-15)


def test_build_star_file(capsys, star3_file):
    code, out, _ = run(capsys, "build", "--file", star3_file)
    rows = amplitude_rows(out)
    assert code == EXIT_PASS and len(rows) == 8
    re = np.array([float(r[2]) for r in rows])
    assert np.allclose(re * np.sqrt(8), [1, 1, 1, 1, 1, -1, -1, 1])


def test_build_general_basis(capsys):
    code, out, _ = run(capsys, "build", "--ghz", "general", "--d", "3", "--a", "1,0,0", "--n", "2")
    assert code == EXIT_PASS and amplitude_rows(out) == [["0", "00", "1", "0"]]
    code, out, _ = run(capsys, "build", "--ghz", "general", "--d", "3", "--a", "1,0,0", "--n", "2", "--all")
    assert len(amplitude_rows(out)) == 9


def test_build_amplitudes_round_trip(capsys):
    from nsghz.ghz import ghz_qudit
    code, out, _ = run(capsys, "build", "--ghz", "qudit", "--d", "3", "--n", "2", "--alpha", "0.37", "--all")
    got = np.array([float(r[2]) + 1j * float(r[3]) for r in amplitude_rows(out)])
    assert np.array_equal(got, ghz_qudit(2, 3, 0.37).amps)


def test_build_structured_and_output_file(capsys, tmp_path):
    path = tmp_path / "out.jsonl"
    code, out, _ = run(capsys, "build", "--ghz", "qubit", "--n", "3", "--format", "structured",
                       "-o", str(path))
    assert code == EXIT_PASS and out == ""
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    assert lines[0]["tool"] == "nsghz" and lines[0]["command"][0] == "build"
    assert [r["basis"] for r in lines[1:]] == ["000", "111"]


def test_build_errors(capsys, tmp_path):
    bad = tmp_path / "bad.whg"
    bad.write_text("d=2 n=2\nedge 1 3 : 1\n")
    code, _, err = run(capsys, "build", "--file", str(bad))
    assert code == EXIT_USAGE and "line 2" in err
    assert run(capsys, "build", "--file", str(tmp_path / "missing.whg"))[0] == EXIT_USAGE
    assert run(capsys, "build", "--ghz", "qubit")[0] == EXIT_USAGE
    assert run(capsys, "build", "--ghz", "general", "--n", "2")[0] == EXIT_USAGE


# -- verify ----------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("verify", "prop1", "--n", "5", "--alpha", "0.7"),
    ("verify", "prop2", "--n", "4", "--alpha", "0.3"),
    ("verify", "appendix-c", "--d", "3", "--n", "2", "--alpha", "0.4"),
    ("verify", "prop2-qudit", "--d", "3", "--n", "2", "--alpha", "0.4"),
    ("verify", "qudit-ghz", "--d", "5", "--n", "3", "--alpha", "0.2"),
    ("verify", "prop3", "--d", "3", "--n", "3", "--seed", "4"),
    ("verify", "half-alpha", "--n", "4"),
    ("verify", "commutation", "--d", "3", "--n", "3"),
])
def test_verify_passes(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_PASS and "PASS" in out


def test_verify_prop3_explicit_vector(capsys):
    assert run(capsys, "verify", "prop3", "--d", "2", "--n", "3", "--a", "0.6,0.8i")[0] == EXIT_PASS
    assert run(capsys, "verify", "prop3", "--d", "3", "--n", "3", "--a", "0.6,0.8i")[0] == EXIT_USAGE


def test_verify_zero_tol_fails(capsys):
    code, out, _ = run(capsys, "verify", "prop1", "--n", "3", "--tol", "0")
    assert code == EXIT_FAIL and "FAIL" in out


def test_verify_structured_records(capsys):
    code, out, _ = run(capsys, "verify", "prop2", "--n", "2", "--alpha", "0.3", "--format", "structured")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_PASS and lines[0]["version"]
    for rec in lines[1:]:
        assert set(rec) == {"prop", "params", "metric", "value", "pass"}


def test_usage_errors(capsys):
    assert run(capsys, "verify", "prop1")[0] == EXIT_USAGE
    assert run(capsys, "verify", "prop9", "--n", "2")[0] == EXIT_USAGE
    assert run(capsys, "verify", "prop1", "--n", "2", "--d", "3")[0] == EXIT_USAGE
    assert run(capsys, "verify", "prop1", "--n", "2", "--tol", "-1")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE


def test_cap_exit_codes(capsys, monkeypatch):
    assert run(capsys, "verify", "prop1", "--n", "6", "--cap", "32")[0] == EXIT_CAP
    assert run(capsys, "build", "--ghz", "qubit", "--n", "6", "--cap", "63")[0] == EXIT_CAP
    assert run(capsys, "verify", "prop2", "--n", "5", "--cap", "32")[0] == EXIT_CAP
    monkeypatch.setenv("NSGHZ_CAP", "16")
    assert run(capsys, "verify", "prop1", "--n", "5")[0] == EXIT_CAP
    assert run(capsys, "decompose", "--n", "3", "--d", "3", "--alpha", "0.2")[0] == EXIT_CAP
    assert run(capsys, "verify", "prop1", "--n", "4")[0] == EXIT_PASS


# -- sweep -----------------------------------------------------------------------------

def test_sweep_prop1_rows(capsys):
    code, out, _ = run(capsys, "sweep", "prop1", "--n", "2:6", "--alpha", "0:1:21", "--workers", "1")
    assert code == EXIT_PASS
    assert out.splitlines()[-1] == "105 rows, 0 failed"


def test_sweep_empty_grid(capsys):
    code, out, _ = run(capsys, "sweep", "prop1", "--n", "2:3", "--alpha", "0:1:0", "--format", "structured")
    assert code == EXIT_PASS and len(out.splitlines()) == 1


def test_sweep_zero_tol_reports_every_row(capsys):
    code, out, _ = run(capsys, "sweep", "prop1", "--n", "2:3", "--alpha", "0:1:3", "--tol", "0",
                       "--workers", "1")
    assert code == EXIT_FAIL and out.splitlines()[-1] == "6 rows, 6 failed"


def test_sweep_order_independent_of_workers(capsys):
    base = ["sweep", "prop2-qudit", "--n", "2:3", "--d", "2:3", "--alpha", "0:1:3", "--format", "structured"]
    _, serial, _ = run(capsys, *base, "--workers", "1")
    _, parallel, _ = run(capsys, *base, "--workers", "3")
    assert serial.splitlines()[1:] == parallel.splitlines()[1:]
    assert len(serial.splitlines()) > 1


def test_sweep_prop3_samples_are_seeded():
    a = sweep_tasks("prop3", [2], [3], [], 1e-10, samples=4, seed=7)
    b = sweep_tasks("prop3", [2], [3], [], 1e-10, samples=4, seed=7)
    c = sweep_tasks("prop3", [2], [3], [], 1e-10, samples=4, seed=8)
    assert len(a) == 4 and a == b and a != c
    assert [p["sample"] for _, p in a] == [0, 1, 2, 3]


def test_sweep_qubit_only_ignores_d():
    tasks = sweep_tasks("prop1", [2, 3], [2, 3, 5], [0.1, 0.2], 1e-10)
    assert len(tasks) == 4 and all(p["d"] == 2 for _, p in tasks)


# -- decompose and resolve-sign ----------------------------------------------------------

def test_decompose_qutrit_pair(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "2", "--d", "3", "--alpha", "0.4")
    line = next(x for x in out.splitlines() if x.startswith("I_"))
    assert code == EXIT_PASS and line.startswith("I_{1,2}:")
    values = [float(chunk.split()[-1]) for chunk in line.split(":", 1)[1].split(";")]
    assert values == pytest.approx([-1.2] * 3, abs=1e-12)


def test_decompose_qubit_triple(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "3", "--d", "2", "--alpha", "0.3")
    lines = [x for x in out.splitlines() if x.startswith("I_")]
    assert code == EXIT_PASS and len(lines) == 4
    assert float(lines[-1].split()[-1]) == pytest.approx(1.2, abs=1e-12)
    assert all(float(x.split()[-1]) == pytest.approx(-0.6, abs=1e-12) for x in lines[:3])


def test_decompose_zero_alpha(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "3", "--d", "3", "--alpha", "0")
    assert code == EXIT_PASS and "no corrections" in out and "residual 0.000e+00" in out


def test_decompose_structured(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "2", "--d", "3", "--alpha", "0.4", "--format", "structured")
    recs = [json.loads(x) for x in out.splitlines()[1:]]
    assert code == EXIT_PASS and [r["metric"] for r in recs] == ["I_1,2", "product_residual"]


def test_resolve_sign(capsys):
    code, out, _ = run(capsys, "resolve-sign", "--format", "structured")
    recs = [json.loads(x) for x in out.splitlines()[1:]]
    assert code == EXIT_PASS and all(r["pass"] for r in recs)
    assert run(capsys, "resolve-sign", "--d", "7")[0] == EXIT_USAGE


# -- reproducibility ---------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("verify", "prop3", "--d", "3", "--n", "2", "--format", "structured"),
    ("sweep", "qudit-ghz", "--n", "2:3", "--d", "3", "--alpha", "0:1:4", "--format", "structured"),
    ("build", "--ghz", "qudit", "--d", "3", "--n", "3", "--alpha", "0.3", "--format", "structured"),
])
def test_structured_output_byte_stable(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and first
