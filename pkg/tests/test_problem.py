import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.errors import ConfigMismatchError, ProblemInputError
from app.padic import RingConfig
from app.problem import CommuteTask, ProblemDocument, build_problem, load_problem, parse_scalar
from app.settings import Settings


def test_parse_scalar_literals():
    cfg = RingConfig(3, rel_precision=12)
    assert parse_scalar(cfg, 7).agrees(7)
    assert parse_scalar(cfg, "-5").agrees(-5)
    assert parse_scalar(cfg, "1/2").agrees(Fraction(1, 2))
    x = parse_scalar(cfg, "3^2*5")
    assert x.agrees(45) and x.valuation == 2
    assert parse_scalar(cfg, "3^-1*2").agrees(Fraction(2, 3))


def test_parse_scalar_extension_element():
    cfg = RingConfig(3, residue_degree=2, rel_precision=12)
    x = parse_scalar(cfg, [0, 1])
    assert (x * x).agrees(-1)


def test_parse_scalar_rejects_garbage():
    cfg = RingConfig(3)
    for bad in (True, "abc", "5^1*2", 1.5, [1, "x"]):
        with pytest.raises(ProblemInputError):
            parse_scalar(cfg, bad)


def test_load_cheby_document():
    problem = load_problem("data/problems/cheby.json", Settings())
    f = problem.get("f")
    assert f.is_polynomial
    assert f[1].agrees(9) and f[3].agrees(1)
    assert problem.cap == 24
    assert problem.total_cap == 12
    assert [t.command for t in problem.document.tasks] == ["analyze", "commute", "semiconj"]
    assert problem.describe()["p"] == 3


def test_truncated_series_spec():
    problem = load_problem("data/problems/chebytwo.json", Settings())
    h = problem.get("h")
    assert not h.is_polynomial
    assert h.cap == 24
    assert h[1].is_exact_zero
    assert h[2].agrees(1) and h[3].agrees(-1)


def test_overrides_take_precedence(monkeypatch):
    monkeypatch.setenv("PADYN_CAP", "10")
    doc = ProblemDocument.model_validate({"ring": {"p": 5}, "series": {"f": [5, 1]}})
    problem = build_problem(doc, Settings.from_env())
    assert problem.cap == 10
    assert problem.total_cap == 5
    assert problem.config.rel_precision == Settings().precision
    problem = build_problem(doc, Settings.from_env(), precision=8, cap=6, total_cap=2)
    assert (problem.cap, problem.total_cap, problem.config.rel_precision) == (6, 2, 8)


def test_document_values_beat_environment(monkeypatch):
    monkeypatch.setenv("PADYN_PRECISION", "40")
    doc = ProblemDocument.model_validate({"ring": {"p": 5, "rel_precision": 9}, "cap": 7})
    problem = build_problem(doc, Settings.from_env())
    assert problem.config.rel_precision == 9
    assert problem.cap == 7


def test_unknown_series():
    doc = ProblemDocument.model_validate({"ring": {"p": 5}})
    problem = build_problem(doc, Settings())
    with pytest.raises(ProblemInputError):
        problem.get("f")


def test_invalid_ring():
    doc = ProblemDocument.model_validate({"ring": {"p": 6}})
    with pytest.raises(ProblemInputError):
        build_problem(doc, Settings())


def test_load_errors(tmp_path):
    with pytest.raises(ProblemInputError):
        load_problem(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ProblemInputError):
        load_problem(broken)
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"ring": {"p": 3}, "colour": "blue"}), encoding="utf-8")
    with pytest.raises(ProblemInputError):
        load_problem(extra)


def test_commute_task_needs_exactly_one_target():
    with pytest.raises(ValidationError):
        CommuteTask(command="commute", g="u", a=2)
    with pytest.raises(ValidationError):
        CommuteTask(command="commute")
    assert CommuteTask(command="commute", a=2).a == 2


def test_default_tasks():
    doc = ProblemDocument.model_validate({"ring": {"p": 5}, "series": {"f": [5, 1]}})
    problem = build_problem(doc, Settings())
    assert problem.tasks_for("log")[0].f == "f"
    assert problem.tasks_for("semiconj")[0].m == 2


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv("PADYN_PRECISION", "beaucoup")
    with pytest.raises(ConfigMismatchError, match="PADYN_PRECISION"):
        Settings.from_env()
