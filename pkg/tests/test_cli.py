import json
import os
import subprocess
import sys

import pytest

from ldorbits import cli
from ldorbits.errors import CmBoundViolation

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def run(name, out, *extra):
    return cli.main(["--config", os.path.join(CONFIGS, name), "--out", str(out), *extra])


def load(out):
    with open(os.path.join(out, "report.json")) as fh:
        return json.load(fh)


def test_stratify_job(tmp_path):
    assert run("stratify_sl2.json", tmp_path) == 0
    rep = load(tmp_path)
    assert rep["schema_version"] == 1
    assert rep["result"]["counts"]["total"] == 5
    with open(tmp_path / "strata.dot") as fh:
        assert fh.read().count("doublecircle") == 4


def test_units_jobs(tmp_path):
    assert run("units_sqrt2.json", tmp_path / "a") == 0
    assert load(tmp_path / "a")["result"]["verdict"] == "discrete"
    assert run("units_quartic.json", tmp_path / "b") == 0
    assert load(tmp_path / "b")["result"]["verdict"] == "circle_times_cyclic"


def test_predict_job(tmp_path):
    assert run("predict_block.json", tmp_path) == 0
    pred = load(tmp_path)["result"]["prediction"]
    assert pred["partition"] == [[1, 2], [3, 4]] and pred["dense"] is False


def test_forms_jobs(tmp_path):
    assert run("density.json", tmp_path / "d", "--height", "20") == 0
    rep = load(tmp_path / "d")["result"]
    assert len(rep["probes"]) == 5
    assert (tmp_path / "d" / "scan.csv").exists()
    assert run("cm_scan.json", tmp_path / "c", "--height", "6") == 0
    assert load(tmp_path / "c")["result"]["scan"]["violations"] == 0


def test_bad_minpoly_exit_1(tmp_path, capsys):
    assert run("bad_minpoly.json", tmp_path) == 1
    assert "NotMonic" in capsys.readouterr().err


def test_malformed_json_exit_1(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert cli.main(["--config", str(p), "--out", str(tmp_path)]) == 1


def test_theorem_violation_exit_2(tmp_path, monkeypatch, capsys):
    def boom(cfg, out):
        raise CmBoundViolation("synthetic")

    monkeypatch.setitem(cli.HANDLERS, "units", boom)
    assert run("units_sqrt2.json", tmp_path) == 2
    assert "CmBoundViolation" in capsys.readouterr().err


def test_byte_identical_reports(tmp_path):
    for name in ("stratify_sl2.json", "density.json"):
        a, b = tmp_path / (name + "a"), tmp_path / (name + "b")
        assert run(name, a, "--height", "15") == 0
        assert run(name, b, "--height", "15") == 0
        assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_float_formatting():
    text = cli.dumps({"x": 1 / 3, "y": [2.0, 1e-20]})
    assert '"x": 0.333333333333' in text
    assert json.loads(text)["y"][1] == 1e-20


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "ldorbits", "--config", os.path.join(CONFIGS, "units_sqrt2.json"),
                        "--out", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
