from pathlib import Path

from app.problem import COMMANDS, load_problem
from main import cli


def test_cli_exposes_every_command():
    assert set(COMMANDS) | {"run", "selftest"} == set(cli.commands)


def test_bundled_problems_load():
    paths = sorted(Path("data/problems").glob("*.json"))
    assert paths
    for path in paths:
        problem = load_problem(path)
        assert problem.series
