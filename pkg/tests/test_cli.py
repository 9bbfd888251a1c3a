import json
import math
import subprocess
import sys

import pytest

from bsk.cli import RunConfig, UsageError, dumps_json, main
from bsk.janowski import CSV_COLUMNS


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_example(capsys):
    code, out, _ = run_cli(capsys, "eval", "--alpha", "0.5", "--lambda-re", "1", "--z-re", "0.5")
    assert code == 0
    data = json.loads(out)
    assert data["value_re"] == pytest.approx(1.2974425414, abs=1e-10)
    assert data["value_im"] == 0


def test_eval_integral_and_derivative(capsys):
    _, out, _ = run_cli(capsys, "eval", "--alpha", "0.9", "--lambda-re", "1", "--lambda-im", "1",
                        "--z-re", "0.2", "--z-im", "-0.1", "--method", "integral")
    _, out2, _ = run_cli(capsys, "eval", "--alpha", "0.9", "--lambda-re", "1", "--lambda-im", "1",
                         "--z-re", "0.2", "--z-im", "-0.1")
    a, b = json.loads(out), json.loads(out2)
    assert abs(complex(a["value_re"], a["value_im"]) - complex(b["value_re"], b["value_im"])) < 1e-10
    _, out, _ = run_cli(capsys, "eval", "--alpha", "1", "--order", "1")
    assert json.loads(out)["value_re"] == pytest.approx(4 / (3 * math.pi), abs=1e-13)


def test_alpha0(capsys):
    code, out, _ = run_cli(capsys, "alpha0")
    assert code == 0 and json.loads(out)["alpha0"] == pytest.approx(0.5, abs=1e-9)


def test_scan_example_csv(capsys):
    code, out, _ = run_cli(capsys, "scan", "--A", "1", "--B", "-1", "--lambda", "1",
                           "--alpha-lo", "0.6", "--alpha-hi", "1.4", "--n", "9", "--output", "csv")
    assert code == 0
    lines = out.rstrip("\n").split("\n")
    assert lines[0].split(",") == list(CSV_COLUMNS)
    rows = [dict(zip(CSV_COLUMNS, line.split(","))) for line in lines[1:]]
    assert len(rows) == 9
    assert all(r["certified"] == "false" and r["numeric_member"] == "true" for r in rows)


def test_scan_json_is_array(capsys):
    _, out, _ = run_cli(capsys, "scan", "--A", "1", "--B", "-1", "--alpha-lo", "1.5", "--alpha-hi", "3",
                        "--n", "4", "--n-r", "8", "--n-theta", "16")
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 4
    assert all(r["certified"] and r["numeric_member"] for r in data)


def test_verify(capsys):
    code, out, _ = run_cli(capsys, "verify", "--alpha", "2")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert all(i["status"] == "pass" for i in report["identities"] if i["name"] != "closed_form_half")
    _, out, _ = run_cli(capsys, "verify", "--alpha", "0.5")
    report = json.loads(out)
    assert report["passed"]
    assert {i["name"]: i["status"] for i in report["identities"]}["closed_form_half"] == "pass"
    _, out, _ = run_cli(capsys, "verify", "--alpha", "0.4", "--only", "chain_identities")
    assert json.loads(out)["identities"][0]["status"] == "skipped"


def test_janowski_command(capsys):
    code, out, _ = run_cli(capsys, "janowski", "--alpha", "2", "--A", "1", "--B", "-1", "--n-r", "16", "--n-theta", "32")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "certified" and data["numeric_member"]
    assert "theorem1" in data and "theorem2" not in data
    code, out, _ = run_cli(capsys, "janowski", "--alpha", "2", "--A", "1", "--B", "-1", "--output", "csv",
                           "--n-r", "8", "--n-theta", "16")
    assert code == 0 and out.startswith("alpha,lambda,A,B,verdict,")


def test_dominance_command(capsys):
    code, out, _ = run_cli(capsys, "dominance", "--alpha", "1.5", "--target", "mobius", "--A", "1", "--B", "-1",
                           "--n-r", "16", "--n-theta", "32")
    assert code == 0 and json.loads(out)["dominated"]
    code, out, _ = run_cli(capsys, "dominance", "--alpha", "1.5", "--target", "scaled", "--scale", "0.5",
                           "--n-r", "16", "--n-theta", "32")
    assert code == 0 and not json.loads(out)["dominated"]


@pytest.mark.parametrize(
    "args",
    [
        ("eval", "--alpha", "-0.7"),
        ("eval", "--alpha", "1", "--z-re", "1.5"),
        ("eval", "--alpha", "1", "--method", "integral", "--order", "1"),
        ("janowski", "--alpha", "1", "--A", "1", "--B", "-1", "--lambda-im", "0.5"),
        ("scan", "--A", "1", "--B", "-1", "--lambda-im", "1", "--alpha-lo", "1", "--alpha-hi", "2", "--n", "2"),
        ("janowski", "--alpha", "1", "--A", "0.2", "--B", "0.5"),
        ("verify", "--alpha", "1", "--n-r", "2"),
        ("eval", "--alpha", "1", "--max-terms", "4"),
        ("dominance", "--alpha", "1.5", "--target", "poly", "--coeffs", "0,1,2", "--n-r", "8", "--n-theta", "8"),
        ("dominance", "--alpha", "1.5", "--target", "poly"),
    ],
)
def test_invalid_input_exit_2(capsys, args):
    code, out, err = run_cli(capsys, *args)
    assert code == 2 and out == "" and err.startswith("error:")


@pytest.mark.parametrize(
    "args",
    [
        ("eval", "--alpha", "1", "--z-re", "0.99", "--max-terms", "16"),
        ("eval", "--alpha", "1", "--z-re", "0.9", "--method", "integral", "--quad-levels", "1"),
    ],
)
def test_nonconvergence_exit_3(capsys, args):
    code, out, err = run_cli(capsys, *args)
    assert code == 3 and out == "" and "not converged" in err


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("BSK_THREADS", "abc")
    code, _, err = run_cli(capsys, "scan", "--A", "1", "--B", "-1", "--alpha-lo", "1", "--alpha-hi", "2", "--n", "2")
    assert code == 2 and "BSK_THREADS" in err
    outs = []
    for threads in ("1", "0", "3"):
        monkeypatch.setenv("BSK_THREADS", threads)
        _, out, _ = run_cli(capsys, "scan", "--A", "0.5", "--B", "-0.5", "--alpha-lo", "0", "--alpha-hi", "3",
                            "--n", "5", "--n-r", "8", "--n-theta", "16", "--output", "csv")
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_out_file_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["scan", "--A", "1", "--B", "-1", "--alpha-lo", "0.6", "--alpha-hi", "1.4", "--n", "9",
                     "--output", "csv", "--out", str(p)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b and b"\r" not in a


def test_json_float_format():
    text = dumps_json({"x": 0.1, "y": 1.0, "z": float("nan"), "n": 3, "b": True, "s": "a\"b", "l": [1e-300, None]})
    assert text == '{"x": 0.10000000000000001, "y": 1.0, "z": null, "n": 3, "b": true, "s": "a\\"b", "l": [1e-300, null]}\n'
    assert json.loads(text)["x"] == 0.1


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("plot")
    with pytest.raises(UsageError):
        RunConfig("eval", grid_spec=(3, 128, 1e-3))
    with pytest.raises(UsageError):
        RunConfig("eval", output="xml")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bsk", "alpha0"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["alpha0"] == pytest.approx(0.5, abs=1e-9)
