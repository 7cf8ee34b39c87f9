"""
Tests for the command-line entry point.
"""

import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from main import EXIT_FAILS, EXIT_OK, EXIT_USAGE, main

EXAMPLE_MODEL = {
    "level": 3,
    "channels": ["c"],
    "states": ["p", "q"],
    "initial": "p",
    "rules": [
        {"from": "p", "channel": "c", "op": "!", "letter": 1, "to": "q"},
        {"from": "q", "channel": "c", "op": "?", "letter": 3, "to": "p"},
        {"from": "p", "channel": "c", "op": "!", "letter": 0, "to": "p"},
        {"from": "q", "channel": "c", "op": "!", "letter": 3, "to": "q"},
    ],
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def model_file(tmp_path):
    return write_json(tmp_path / "model.json", EXAMPLE_MODEL)


def test_order(capsys):
    """Test the embedding command and its witness."""
    code, out = run_cli(capsys, "order", "201", "22011")
    assert code == EXIT_OK
    assert out == {"pleq": True, "witness": ["2", "", "1"]}

    code, out = run_cli(capsys, "order", "112", "12112")
    assert code == EXIT_FAILS
    assert out == {"pleq": False}

    code, out = run_cli(capsys, "order", "1:a", "0:x,1:ba", "--generalized", "subword")
    assert code == EXIT_OK


def test_usage_errors(capsys):
    """Test malformed input and unknown commands."""
    code, out = run_cli(capsys, "order", "1x", "2")
    assert code == EXIT_USAGE
    assert "error" in out
    code, out = run_cli(capsys, "order", "3", "2", "--level", "2")
    assert code == EXIT_USAGE
    assert out["error"]
    code, out = run_cli(capsys, "ord", "encode")
    assert code == EXIT_USAGE
    assert set(out) == {"error"}
    code, out = run_cli(capsys, "ord", "maxot", "1", "0", "1")
    assert code == EXIT_USAGE
    assert "m >= 1" in out["error"]
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == EXIT_USAGE


def test_ordinal_commands(capsys):
    """Test codes, fundamental sequences and Hardy values."""
    assert run_cli(capsys, "ord", "encode", "w^w", "--level", "5") == (EXIT_OK, {"code": "345"})
    assert run_cli(capsys, "ord", "decode", "45445") == (EXIT_OK, {"term": "w+w^2"})
    assert run_cli(capsys, "ord", "fund", "e0", "3") == (EXIT_OK, {"term": "w^(w^w)"})
    assert run_cli(capsys, "ord", "hardy", "w", "3") == (EXIT_OK, {"value": 6})
    assert run_cli(capsys, "ord", "fgh", "2", "3") == (EXIT_OK, {"value": 24})
    assert run_cli(capsys, "ord", "fgh", "w", "2") == (EXIT_OK, {"value": 8})
    assert run_cli(capsys, "ord", "cnf", "1+w") == (EXIT_OK, {"term": "w"})
    assert run_cli(capsys, "ord", "leqo", "w*2", "w^2") == (EXIT_FAILS, {"leqo": False})
    assert run_cli(capsys, "ord", "tree-encode", "(((()())))", "--level", "2") == (EXIT_OK, {"code": "112"})


def test_hardy_budget_exhausted(capsys):
    """Test that a runaway Hardy computation reports the budget."""
    code, out = run_cli(capsys, "ord", "hardy", "w^(w^w)", "3", "--budget", "10")
    assert code == EXIT_FAILS
    assert out["budget"] is True


def test_verify(capsys, tmp_path, model_file):
    """Test coverability and reachability verdicts."""
    targets = write_json(tmp_path / "targets.json", [{"state": "q", "channels": {"c": "3"}}])
    code, out = run_cli(capsys, "verify", model_file, "--from", "p:", "--cover", targets)
    assert code == EXIT_OK
    assert out["answer"] is True
    assert out["certificate"]["kind"] == "run"

    code, out = run_cli(capsys, "verify", model_file, "--from", "p:", "--reach", "q:0")
    assert code == EXIT_FAILS
    assert out["answer"] is False

    code, _ = run_cli(capsys, "verify", model_file, "--from", "p:", "--terminate", "--semantics", "reliable")
    assert code == EXIT_USAGE


def test_sim_and_replay(capsys, tmp_path, model_file):
    """Test random simulation and replay of stored runs."""
    code, out = run_cli(capsys, "sim", model_file, "--from", "p:", "--steps", "5", "--seed", "1")
    assert code == EXIT_OK
    assert out["start"] == {"state": "p", "channels": {"c": ""}}

    good = {
        "start": {"state": "p", "channels": {"c": ""}},
        "steps": [{"label": {"rule": 2}, "config": {"state": "p", "channels": {"c": "0"}}}],
    }
    code, out = run_cli(capsys, "sim", model_file, "--replay", write_json(tmp_path / "good.json", good))
    assert (code, out) == (EXIT_OK, {"valid": True, "steps": 1})

    bad = {
        "start": {"state": "p", "channels": {"c": ""}},
        "steps": [{"label": {"rule": 1}, "config": {"state": "p", "channels": {"c": ""}}}],
    }
    code, out = run_cli(capsys, "sim", model_file, "--replay", write_json(tmp_path / "bad.json", bad))
    assert code == EXIT_FAILS
    assert out["valid"] is False and out["index"] == 0


def test_gen(capsys, tmp_path):
    """Test gadget generation to stdout and to a file."""
    code, out = run_cli(capsys, "gen", "s1", "--level", "1")
    assert code == EXIT_OK
    assert out["model"]["level"] == 2
    assert out["rules"] == len(out["model"]["rules"])

    target = tmp_path / "s3.json"
    code, out = run_cli(capsys, "gen", "s3", "--level", "1", "-o", str(target))
    assert code == EXIT_OK
    assert out["output"] == str(target)
    assert json.loads(target.read_text(encoding="utf-8"))["channels"] == ["o", "c", "t"]

    code, _ = run_cli(capsys, "gen", "reduction")
    assert code == EXIT_USAGE
