import json
import os
import subprocess

import pytest

CLI = os.environ.get("HAMDER_CLI", "hamder")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_info_dims():
    r = run("info", "--p", "5", "--m", "2", "--n", "4", "--t", "1,1,1,1")
    assert r.returncode == 0
    dims = json.loads(r.stdout)["dims"]
    assert (dims["O"], dims["Heven"], dims["N"], dims["G"]) == (10000, 4998, 4997, 64)


def test_eval_and_bracket():
    r = run("eval", "2*x{5,6} d1", "--format", "text")
    assert r.returncode == 0 and r.stdout.strip() == "2*x{5,6} d1"
    r = run("bracket", "DH(x^(3,0,0,0))", "DH(x^(0,0,1,0))")
    assert r.returncode == 0
    assert json.loads(r.stdout)["bracket"]["canonical"] == "x^(1,0,0,0) d3"


def test_exit_codes(tmp_path):
    assert run("verify", "l3_3").returncode == 0
    assert run("verify", "no_such_check").returncode == 3
    bad = run("eval", "[DH(x^(3,0,0,0)), DH(x{6}x{8})]")
    assert bad.returncode == 3 and "x{6,8}" in bad.stderr
    assert run("info", "--m", "1", "--n", "2", "--t", "1,1").returncode == 3
    assert run("verify", "p1_3").returncode == 3
    budget = run("verify", "t1_7", "--budget", "10")
    assert budget.returncode == 4 and json.loads(budget.stdout)["budget_exhausted"]
    fail = run("verify", "p2_4", "--t", "2,1,1,1", "--samples", "10", "--cap", "2")
    assert fail.returncode == 2 and json.loads(fail.stdout)["counterexamples"]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("p = 5\nm = 2\nn = 4\nt = 2,1,1,1\n")
    r = run("info", "--config", str(cfg))
    assert json.loads(r.stdout)["params"]["t"] == [2, 1, 1, 1]
    r = run("info", "--config", str(cfg), "--t", "1,1,1,1")
    assert json.loads(r.stdout)["params"]["t"] == [1, 1, 1, 1]


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("verify", "zd_metadata", "--t", "2,1,1,1", "--out", str(out)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["status"] == "pass" and report["elapsed_ms"] == 0


def test_relaxed_oracle_is_report_only():
    r = run("verify", "t3_8_oracle", "--p", "3", "--m", "1", "--n", "2", "--t", "1,1", "--mode", "relaxed")
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["status"] == "report_only" and report["extrapolated"]
    # strict mode refuses oracle checks; "all" skips them
    assert run("verify", "t3_8_oracle").returncode == 3


def test_classify_map_file(tmp_path):
    spec = {"domain": "N", "combination": {"inner": "x{5} d5 + x{6} d6 + x{7} d7 + x{8} d8",
                                           "lambda_prime": 2}}
    path = tmp_path / "map.json"
    path.write_text(json.dumps(spec))
    r = run("classify", "--map", str(path), "--samples", "1000", "--cap", "2")
    assert r.returncode == 0, r.stderr
    c = json.loads(r.stdout)["classification"]
    assert c["residual_zero"] and c["coefficients"]["lambda_prime"] == 3
    assert c["coefficients"]["inner"] == "0"
