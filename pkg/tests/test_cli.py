import json
import subprocess
import sys

import pytest

from cli_cases import CASES, SEEDED, run_to_bytes
from invsub.cli import run


def test_ml_csv_value(capsys):
    assert run(["ml", "--beta", "0.5", "--z", "1"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert lines[0] == "z,value"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.42758357615580683, rel=1e-14)


def test_constants_json(capsys):
    assert run(["constants", "--alpha", "2", "--beta", "0.5", "--chi", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"config", "results", "diagnostics"}
    assert doc["results"]["mu"] == pytest.approx(0.75)


def test_smallball_analytic_only(capsys):
    assert run(["smallball", "--beta", "0.5", "--u", "1", "--analytic-only", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert json.dumps(doc["results"]).count("0.4546") >= 1


def test_exit_codes(capsys):
    assert run(["nope"]) == 1
    assert run(["ml", "--beta", "2", "--z", "1"]) == 2
    assert run(["smallball", "--beta", "0.5", "--u", "-1", "--analytic-only"]) == 2
    assert run(["integral-test", "--which", "hirsch", "--family", "Nope"]) == 1


def test_failed_verification_exit_code(capsys):
    # Stone's rho does not reproduce the Levy-identity local time
    assert run(["local-time-check", "--samples", "3000", "--grid", "256"]) == 3


def test_runtime_only_on_request(capsys):
    run(["ml", "--beta", "0.5", "--z", "1"])
    cap = capsys.readouterr()
    assert "runtime_seconds" not in cap.out and "runtime_seconds" in cap.err
    run(["ml", "--beta", "0.5", "--z", "1", "--embed-runtime", "--format", "json"])
    assert "runtime_seconds" in json.loads(capsys.readouterr().out)["diagnostics"]


@pytest.mark.parametrize("name", sorted(CASES))
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_reruns_are_byte_identical(name, fmt, tmp_path):
    argv = CASES[name] + ["--format", fmt]
    c1, b1 = run_to_bytes(run, argv, tmp_path, "a")
    c2, b2 = run_to_bytes(run, argv, tmp_path, "b")
    assert c1 == c2 and c1 in (0, 3)
    assert b1 == b2 and b1


@pytest.mark.parametrize("name", sorted(SEEDED))
def test_threads_do_not_change_results(name, tmp_path):
    argv = CASES[name] + ["--format", "json"]
    _, b1 = run_to_bytes(run, argv + ["--threads", "1"], tmp_path, "a")
    _, b4 = run_to_bytes(run, argv + ["--threads", "4"], tmp_path, "b")
    d1, d4 = json.loads(b1), json.loads(b4)
    assert d1["results"] == d4["results"]
    assert d1["config"]["threads"] == 1 and d4["config"]["threads"] == 4


def test_seed_changes_results(tmp_path):
    argv = CASES["paths"] + ["--format", "json"]
    _, a = run_to_bytes(run, argv + ["--seed", "1"], tmp_path, "a")
    _, b = run_to_bytes(run, argv + ["--seed", "2"], tmp_path, "b")
    assert json.loads(a)["results"] != json.loads(b)["results"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "invsub", "ml", "--beta", "0.5", "--z", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert "0.42758357615580" in r.stdout
