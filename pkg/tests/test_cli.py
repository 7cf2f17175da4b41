import json

import pytest

from cwcheck.cli import EXIT_BUDGET, EXIT_REACHABLE, EXIT_UNREACHABLE, EXIT_USAGE, main


def test_verify_burns_backward(tmp_path, capsys):
    report = tmp_path / "run.json"
    code = main(["verify", "burns", "--report", str(report), "-q"])
    assert code == EXIT_UNREACHABLE
    assert "unreachable" in capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data["verdict"] == "unreachable" and data["direction"] == "backward"
    assert [r["outcome"] for r in data["refinements"]] == ["unreachable"]


def test_verify_forward_prints_traces(capsys):
    code = main(["verify", "burns", "--direction", "forward", "--trace"])
    assert code == EXIT_UNREACHABLE
    err = capsys.readouterr().err
    assert "refinement 1: trace" in err and "q(6:1)" in err


def test_verify_mutant_is_reachable(tmp_path, capsys):
    report = tmp_path / "run.json"
    code = main(["verify", "burns_mutant_t9", "--report", str(report), "-q"])
    assert code == EXIT_REACHABLE
    data = json.loads(report.read_text())
    assert data["witness_replays"] is True
    assert data["witness"][0]["via"] == ""
    assert "init" in capsys.readouterr().out


def test_budget_exit_code(capsys):
    code = main(["verify", "burns", "--direction", "forward", "--max-refinements", "1", "-q"])
    assert code == EXIT_BUDGET
    assert "budget" in capsys.readouterr().out


def test_resolution_option(tmp_path):
    report = tmp_path / "run.json"
    code = main(["verify", "burns", "--direction", "forward", "--resolution", "q(6:1):2",
                 "--report", str(report), "-q"])
    assert code == EXIT_UNREACHABLE
    first = json.loads(report.read_text())["refinements"][0]
    assert first["resolution"]["q(6:1)"] == 2


def test_oracle_command(capsys):
    assert main(["oracle", "burns", "--n", "3"]) == EXIT_UNREACHABLE
    assert "safe" in capsys.readouterr().out
    assert main(["oracle", "burns_mutant_t9", "--min", "2", "--max", "2"]) == EXIT_REACHABLE


def test_denote_command(capsys):
    code = main(["denote", "burns", "(q(6:1)=0 | q(6:1) | q(6:1)=0)", "--length", "2"])
    assert code == EXIT_UNREACHABLE
    out = capsys.readouterr().out
    assert "q(6:1) q(1:0)" in out and "q(6:1) q(6:1)" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "no_such_model"],
        ["verify", "burns", "--resolution", "nowhere:1"],
        ["verify", "burns", "--resolution", "q(6:1):x"],
        ["denote", "burns", "(q(6:1)=1 | q(6:1) | true)"],
        ["denote", "burns", "garbage"],
    ],
)
def test_input_errors_exit_3(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["verify"], ["verify", "burns", "--direction", "sideways"], ["nope"]])
def test_usage_errors_exit_3(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_bad_model_file(tmp_path, capsys):
    path = tmp_path / "broken.model"
    path.write_text("state a\ninit a\n")
    assert main(["verify", str(path)]) == EXIT_USAGE
    assert "bad pattern" in capsys.readouterr().err
