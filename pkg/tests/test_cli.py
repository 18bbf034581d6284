import json
import subprocess
import sys

import pytest

from superint import cli

SEED = {"alpha": 0, "beta": "-2/9", "epsilon": 1}


def run(tmp_path, problem, command=None, *extra, name="problem.json"):
    path = tmp_path / name
    path.write_text(problem if isinstance(problem, str) else json.dumps(problem), encoding="utf-8")
    out = tmp_path / "out"
    command = command or problem["command"]
    code = cli.main([command, "--problem", str(path), "--out", str(out), *extra])
    return code, out


def report(out, name="report.json"):
    return json.loads((out / name).read_text(encoding="utf-8"))


def error(out):
    return json.loads((out / "error.json").read_text(encoding="utf-8"))["error"]


# -- successful commands -------------------------------------------------------------------------

def test_verify2_family(tmp_path):
    code, out = run(tmp_path, {"command": "verify2", "params": {
        "family": "V_I", "integrals": [[0, 0, 0, 1, 0], [1, 0, 0, 0, 0]], "min_integrals": 2}})
    assert code == 0
    r = report(out)
    assert r["passed"] and r["result"]["integral_space_dimension"] >= 2


def test_verify2_failing_tuple_exits_one(tmp_path):
    code, out = run(tmp_path, {"command": "verify2", "params": {
        "potential": "x^3*y", "integrals": [[0, 0, 0, 1, 0]]}})
    assert code == 1
    assert report(out)["checks"] == {"residual_zero[0]": False}


def test_compat4_classification(tmp_path):
    code, out = run(tmp_path, {"command": "compat4", "params": {"A": {"A202": 1}, "expect_class": "I"}})
    assert code == 0
    assert report(out)["result"]["classification"]["class"] == "I"


def test_compat4_certification(tmp_path):
    code, out = run(tmp_path, {"command": "compat4", "params": {"certify": {
        "case": "Q2_1", "params": {"c2": 2, "hbar": 1, "a": "1/2", **SEED},
        "grid": {"x": [0.5, 3], "y": [0.5, 3], "step": 0.01}}}})
    assert code == 0
    cert = report(out)["result"]["certification"]
    assert max(cert["max_residual"].values()) < 1e-6


def test_ptest_vbii3_report(tmp_path):
    code, out = run(tmp_path, {"command": "ptest", "params": {"ode": "VbII3"}})
    assert code == 0
    (b,) = report(out)["result"]["branches"]
    assert b["p"] == "-1" and b["resonances"] == [1, 6] and b["passes"]


def test_ptest_expected_failure(tmp_path):
    code, _ = run(tmp_path, {"command": "ptest", "params": {"expression": "W_y - W^3", "expect": "fail"}})
    assert code == 0
    code, _ = run(tmp_path, {"command": "ptest", "params": {"ode": "P1", "expect": "fail"}})
    assert code == 1


def test_painleve_seed_and_csv(tmp_path):
    code, out = run(tmp_path, {"command": "painleve", "params": {
        "kind": "P4", "params": [0, "-2/9"], "ic": [1, "-2/3", "-2/3"], "range": [1, 3], "compare_seed": True}})
    assert code == 0
    r = report(out)
    assert r["result"]["seed"] == "w = -2/3*z" and r["result"]["seed_max_error"] < 1e-8
    assert (out / "trajectory.csv").read_text().splitlines()[0] == "z,w,wp"


def test_potential_grid(tmp_path):
    code, out = run(tmp_path, {"command": "potential", "params": {
        "case": "VP4", "params": SEED, "mesh": {"x": [-1, 1, 0.5]}, "max_masked": 0}})
    assert code == 0
    assert len((out / "potential.csv").read_text().splitlines()) == 6


def test_spectrum_table(tmp_path):
    code, out = run(tmp_path, {"command": "spectrum", "params": SEED})
    assert code == 0
    lines = (out / "spectrum.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "p,series,E_alg,E_num,|Δ|"
    assert len(lines) == 16
    assert all(float(l.split(",")[4]) < 1e-5 for l in lines[1:])


def test_susy_report(tmp_path):
    code, out = run(tmp_path, {"command": "susy", "params": {**SEED, "ladder_levels": 3}})
    assert code == 0
    r = report(out)
    assert all(r["checks"].values()) and len(r["result"]["zero_modes"]) == 3
    assert (out / "zero_modes.csv").read_text().splitlines()[0] == "z,psi_a,psi_b,psi_c"


def test_custom_output_names(tmp_path):
    code, out = run(tmp_path, {"command": "potential", "params": {
        "case": "VP4", "params": SEED, "mesh": {"x": [0, 1, 0.5]}},
        "outputs": {"report": "r.json", "table": "v.csv"}})
    assert code == 0 and (out / "r.json").exists() and (out / "v.csv").exists()


# -- determinism and tolerance -------------------------------------------------------------------

def test_byte_identical_reruns(tmp_path):
    prob = {"command": "painleve", "params": {"kind": "P2", "params": [1], "ic": [-2, 0.5, 0.25],
                                              "range": [-2, 2]}}
    _, out = run(tmp_path, prob)
    first = (out / "report.json").read_bytes(), (out / "trajectory.csv").read_bytes()
    _, out = run(tmp_path, prob)
    assert ((out / "report.json").read_bytes(), (out / "trajectory.csv").read_bytes()) == first
    assert "seconds" not in first[0].decode()


def test_floats_use_seventeen_digits(tmp_path):
    _, out = run(tmp_path, {"command": "painleve", "params": {
        "kind": "P4", "params": [0, "-2/9"], "ic": [1, "-2/3", "-2/3"], "range": [1, 1.1]}})
    row = (out / "trajectory.csv").read_text().splitlines()[1]
    assert row.split(",")[1] == f"{-2 / 3:.17g}"


def test_tolerance_precedence(tmp_path, monkeypatch):
    prob = {"command": "ptest", "params": {"ode": "P1"}}
    monkeypatch.setenv("SUPERINT_TOL", "0.25")
    _, out = run(tmp_path, prob)
    assert report(out)["tolerance"] == 0.25
    _, out = run(tmp_path, {**prob, "tol": 0.5})
    assert report(out)["tolerance"] == 0.5
    _, out = run(tmp_path, {**prob, "tol": 0.5}, None, "--tol", "0.75")
    assert report(out)["tolerance"] == 0.75
    monkeypatch.delenv("SUPERINT_TOL")
    _, out = run(tmp_path, prob)
    assert report(out)["tolerance"] == cli.DEFAULT_TOL["ptest"]


# -- input errors ---------------------------------------------------------------------------------

@pytest.mark.parametrize("text,kind", [
    ("", "schema"),
    ("{not json", "schema"),
    ('{"command": "ptest", "params": {"ode": "P1"}, "extra": 1}', "schema"),
    ('{"command": "ptest", "params": {"ode": "P7"}}', "schema"),
    ('{"command": "ptest", "params": {"ode": "P1", "junk": 0}}', "schema"),
    ('{"command": "spectrum", "params": {"alpha": 0, "beta": 0, "epsilon": 3}}', "schema"),
    ('{"command": "painleve", "params": {"kind": "P4"}}', "schema"),
])
def test_schema_errors_exit_two(tmp_path, capsys, text, kind):
    code, out = run(tmp_path, text, "ptest")
    assert code == 2
    assert error(out)["kind"] == kind
    assert json.loads(capsys.readouterr().out)["error"]["kind"] == kind


def test_command_mismatch(tmp_path):
    code, out = run(tmp_path, {"command": "ptest", "params": {"ode": "P1"}}, "painleve")
    assert code == 2 and error(out)["path"] == "command"


def test_missing_file(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["ptest", "--problem", str(tmp_path / "none.json"), "--out", str(out)]) == 2
    assert error(out)["kind"] == "io"


def test_module_error_exit_two(tmp_path):
    code, out = run(tmp_path, {"command": "potential", "params": {
        "case": "Q1_1", "params": {"alpha": 1, "beta": 0, "gamma": 0, "delta": 0},
        "mesh": {"x": [0, 1, 0.5], "y": [1, 2, 0.5]}}})
    assert code == 2 and error(out)["kind"] == "module"


@pytest.mark.parametrize("extra", [("--tol", "-1"), ("--threads", "0")])
def test_bad_flags(tmp_path, extra):
    code, out = run(tmp_path, {"command": "ptest", "params": {"ode": "P1"}}, None, *extra)
    assert code == 2 and error(out)["kind"] == "input"


def test_bad_env_tolerance(tmp_path, monkeypatch):
    monkeypatch.setenv("SUPERINT_TOL", "abc")
    code, out = run(tmp_path, {"command": "ptest", "params": {"ode": "P1"}})
    assert code == 2 and error(out)["path"] == "SUPERINT_TOL"


def test_unknown_command_exit_two(tmp_path):
    assert cli.main(["nope", "--problem", "x.json"]) == 2


def test_schema_is_published():
    s = cli.schema()
    assert s["$schema"].endswith("2020-12/schema")
    assert s.get("additionalProperties") is False


def test_console_script(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"command": "ptest", "params": {"ode": "VbII3"}}))
    proc = subprocess.run([sys.executable, "-m", "superint.cli", "ptest", "--problem", str(path),
                           "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads((tmp_path / "o" / "report.json").read_text())["passed"]
