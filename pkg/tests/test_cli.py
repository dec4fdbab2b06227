import json
import subprocess
import sys
from pathlib import Path

import pytest

from steerkit.cli import main
from steerkit.serialize import validate

FIXTURES = Path(__file__).parent / "fixtures"


def run_json(capsys, *argv):
    code = main([*argv, "--output", "json"])
    out = capsys.readouterr().out
    report = json.loads(out) if out.strip() else None
    return code, report


def test_threshold_entry_json(capsys):
    code, rep = run_json(capsys, "threshold", "--entry", "chsh")
    assert code == 0
    validate(rep, "report")
    assert rep["results"]["threshold"]["beta_overall"] == pytest.approx(2.0, abs=1e-12)
    assert set(rep["results"]["threshold"]["per_direction"]) == {"1->2", "2->1"}
    assert rep["request"]["command"] == "threshold"


def test_json_output_is_sorted(capsys):
    main(["list", "--output", "json"])
    text = capsys.readouterr().out
    doc = json.loads(text)
    assert text.strip() == json.dumps(doc, sort_keys=True, indent=2)


def test_certify_expect_violation_exit_codes(capsys):
    code, rep = run_json(capsys, "certify", "--entry", "chsh", "--expect-violation")
    assert code == 0 and rep["results"]["verdict"]["violated"]
    code, rep = run_json(capsys, "certify", "--entry", "chsh", "--state", "werner", "--param", "w=0",
                         "--expect-violation")
    assert code == 2 and not rep["results"]["verdict"]["violated"]
    assert rep["exit_code"] == 2


def test_certify_haar_entry(capsys):
    code, rep = run_json(capsys, "certify", "--entry", "haar", "--state", "werner", "--param", "d=3",
                         "--param", "w=0.5")
    assert code == 0
    v = rep["results"]["verdict"]
    assert v["expectation"] == pytest.approx(0.5 / 3, abs=1e-12)
    assert not v["violated"]
    assert rep["results"]["constraint"] == "plain"


def test_certify_spec_file(capsys):
    code, rep = run_json(capsys, "certify", "--spec", str(FIXTURES / "chsh_full.json"), "--state", "max-entangled")
    assert code == 0 and rep["results"]["verdict"]["violated"]


def test_threshold_lsi_spec_file(capsys):
    code, rep = run_json(capsys, "threshold", "--spec", str(FIXTURES / "chsh_lsi.json"))
    assert code == 0
    assert rep["results"]["threshold"]["per_direction"]["1->2"]["beta"] == pytest.approx(2.0)


def test_scan_tracks_state_parameter(capsys):
    code, rep = run_json(capsys, "scan", "--entry", "ghz-gd", "--state", "gen-ghz", "--range", "0.2:1.4",
                         "--points", "5")
    assert code == 0
    assert rep["results"]["param"] == "omega"
    assert all(p["expectation"] == pytest.approx(7.0) for p in rep["results"]["grid"])


def test_haar_command_is_reproducible(capsys):
    args = ("haar", "--state", "werner", "--param", "d=2", "--param", "w=0.3", "--samples", "1000", "--seed", "4")
    _, a = run_json(capsys, *args)
    _, b = run_json(capsys, *args)
    assert a["results"] == b["results"]
    assert a["results"]["exact"] == pytest.approx(0.35)


def test_text_output(capsys):
    assert main(["threshold", "--entry", "mermin"]) == 0
    out = capsys.readouterr().out
    assert "beta = 2.828427125" in out
    assert "1,2->3" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["threshold", "--entry", "nope"],
        ["threshold"],
        ["certify", "--entry", "chsh", "--state", "unknown"],
        ["threshold", "--entry", "tilted", "--param", "alpha=0.5"],
        ["threshold", "--entry", "chsh", "--param", "noequals"],
        ["threshold", "--spec", "/nonexistent.json"],
        ["scan", "--entry", "tilted", "--state", "ghz"],
        ["haar", "--state", "werner", "--samples", "5"],
    ],
)
def test_errors_exit_one(capsys, argv):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_bad_schema_file_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "lsi", "dims": [2, 2]}))
    assert main(["threshold", "--spec", str(bad)]) == 1
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "steerkit", "list", "--output", "json"],
                         capture_output=True, text=True, check=True)
    names = [e["name"] for e in json.loads(out.stdout)["results"]["entries"]]
    assert "svetlichny" in names and "nghz-global" in names
