import json

import pytest
from click.testing import CliRunner

from pellgraphs.cli import main
from pellgraphs.options import OPTIONS
from pellgraphs.seq import FormulaError


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def test_verify_irr(runner):
    result = runner.invoke(main, ["--threads", "1", "verify", "--max-n", "3", "--checks", "irr"])

    assert result.exit_code == 0
    entries = [json.loads(line) for line in result.stdout.splitlines()]
    assert {
        "check": "irr",
        "n": 2,
        "i": None,
        "expected": 4,
        "actual": 4,
        "pass": True,
        "informational": False,
    } in entries
    assert "PASS" in result.stderr


def test_verify_trivial(runner):
    result = runner.invoke(main, ["--threads", "1", "verify", "--max-n", "1"])
    assert result.exit_code == 0


def test_verify_threads_option(runner):
    args = ["verify", "--max-n", "4", "--threads", "2", "--checks", "closed-form,expansion"]
    result = runner.invoke(main, args)

    assert result.exit_code == 0, result.stderr
    assert "PASS" in result.stderr

    result = runner.invoke(main, ["verify", "--max-n", "4", "--threads", "0"])
    assert result.exit_code == 2


def test_verify_formula_error(runner, monkeypatch):
    def broken(n):
        raise FormulaError(f"sigma_closed(n={n}): 3 is not divisible by 2")

    monkeypatch.setattr("pellgraphs.verify.sigma_closed", broken)
    result = runner.invoke(main, ["--threads", "1", "verify", "--max-n", "3", "--checks", "sigma"])

    assert result.exit_code == 1
    assert isinstance(result.exception, SystemExit)
    entries = [json.loads(line) for line in result.stdout.splitlines()]
    assert [(e["n"], e["pass"], e["expected"]) for e in entries] == [(2, False, None), (3, False, None)]
    assert all("not divisible" in e["error"] for e in entries)


def test_verify_convolution(runner):
    result = runner.invoke(main, ["verify", "--max-n", "4", "--checks", "convolution"])

    assert result.exit_code == 0
    entries = [json.loads(line) for line in result.stdout.splitlines()]
    assert [(e["check"], e["expected"], e["actual"], e["pass"]) for e in entries] == [
        ("convolution", 1, 1, True),
        ("convolution-displayed", 29, 1, False),
    ]


def test_verify_usage_errors(runner):
    result = runner.invoke(main, ["verify", "--max-n", "3", "--checks", "irr,bogus"])
    assert result.exit_code == 2
    assert "unknown check(s) bogus" in result.stderr

    result = runner.invoke(main, ["--build-limit", "5", "verify", "--max-n", "6"])
    assert result.exit_code == 2
    assert "exceeds the build limit 5" in result.stderr
    # restored once the command is done
    assert OPTIONS["pell_build_limit"] == 16

    result = runner.invoke(main, ["verify", "--max-n", "0"])
    assert result.exit_code == 2


def test_build_limit_envvar(runner):
    result = runner.invoke(main, ["graph", "--n", "4"], env={"PELLGRAPHS_BUILD_LIMIT": "3"})
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args, last_line",
    [
        (["--stat", "edges", "--max-n", "4"], "4,58"),
        (["--stat", "irr", "--max-n", "4"], "4,64"),
        (["--stat", "sigma", "--max-n", "3"], "3,36"),
    ],
)
def test_table(runner, args, last_line):
    result = runner.invoke(main, ["table", *args])

    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "n,value"
    assert lines[-1] == last_line


def test_table_e(runner):
    result = runner.invoke(main, ["table", "--stat", "e", "--max-n", "4"])

    assert result.stdout.splitlines()[0] == "n,i,value"
    assert "4,2,11" in result.stdout.splitlines()

    result = runner.invoke(main, ["table", "--stat", "e", "--max-n", "4", "--format", "json"])
    assert {"n": 4, "i": 2, "value": 11} in [json.loads(line) for line in result.stdout.splitlines()]


def test_table_beyond_build_limit(runner):
    result = runner.invoke(main, ["table", "--stat", "e", "--max-n", "60"])
    assert result.exit_code == 0
    assert len(result.stdout.splitlines()) == 1 + 60 * 5


def test_table_errors(runner):
    assert runner.invoke(main, ["table", "--stat", "median", "--max-n", "4"]).exit_code == 2
    assert runner.invoke(main, ["table", "--stat", "irr", "--max-n", "61"]).exit_code == 2
    assert runner.invoke(main, ["table", "--stat", "irr", "--max-n", "4", "--format", "xml"]).exit_code == 2


def test_graph(runner):
    result = runner.invoke(main, ["graph", "--n", "1", "--emit", "edges", "--labels"])
    assert result.exit_code == 0
    assert result.stdout == "0 1\n"

    result = runner.invoke(main, ["graph", "--n", "2", "--emit", "edges"])
    assert len(result.stdout.splitlines()) == 5

    result = runner.invoke(main, ["graph", "--n", "2", "--emit", "adjacency", "--labels"])
    assert result.stdout.splitlines()[3] == "11: 01 10 22"


def test_graph_deterministic(runner):
    first = runner.invoke(main, ["graph", "--n", "5"]).stdout
    second = runner.invoke(main, ["graph", "--n", "5"]).stdout
    assert first == second


def test_classify(runner):
    result = runner.invoke(main, ["classify", "--n", "2"])

    assert result.exit_code == 0
    assert "11 22 swap 2 2" in result.stdout.splitlines()
    assert "00 01 flip 0 0" in result.stdout.splitlines()


def test_histogram(runner):
    result = runner.invoke(main, ["histogram", "--n", "3"])
    assert result.stdout == "n,k,count\n3,0,7\n3,1,6\n3,2,3\n3,3,2\n"

    result = runner.invoke(main, ["histogram", "--n", "2", "--format", "json"])
    assert json.loads(result.stdout) == {"n": 2, "counts": {"0": 2, "1": 2, "2": 1}}
