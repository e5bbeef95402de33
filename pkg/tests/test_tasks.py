import json

import pytest

from app.errors import (
    ConfigMismatchError,
    HypothesisError,
    InvariantViolationError,
    PrecisionExhaustedError,
    ProblemInputError,
)
from app.problem import load_problem
from app.report import Report, Status, TaskResult, fmt_precision
from app.selftest import CHECKS, cmd_selftest
from app.settings import Settings
from app.tasks import Outcome, cmd_analyze, cmd_commute, cmd_endo, cmd_group, cmd_run, cmd_semiconj, guard_task


def small(name, cap=12, precision=20):
    return load_problem(f"data/problems/{name}.json", Settings(), precision=precision, cap=cap)


def test_outcome_status():
    out = Outcome()
    out.claim("a", True, 10)
    assert out.status == Status.certified
    assert out.precision == 10
    out.claim("b", None)
    assert out.status == Status.indeterminate
    out.claim("c", False)
    assert out.status == Status.certified_negative
    assert "c" in out.diagnosis and "b" in out.diagnosis
    assert out.data["claims"]["a"] == {"holds": True, "precision": 10}


def test_guard_task_maps_errors():
    def exhausted():
        raise PrecisionExhaustedError("trop peu de chiffres")

    def refused():
        raise HypothesisError("f'(0) = 0")

    def bad_input():
        raise ProblemInputError("série inconnue")

    assert guard_task("log", "f", exhausted).status == Status.indeterminate
    res = guard_task("log", "f", refused)
    assert res.status == Status.certified_negative
    assert "HypothesisError" in res.diagnosis
    with pytest.raises(ProblemInputError):
        guard_task("log", "f", bad_input)


def test_guard_task_never_certifies_internal_failures():
    def broken():
        raise InvariantViolationError("récursion et limite divergent")

    def mismatch():
        raise ConfigMismatchError("Z_3 vs Z_5")

    res = guard_task("log", "f", broken)
    assert res.status == Status.indeterminate
    assert "erreur interne" in res.diagnosis
    with pytest.raises(ProblemInputError, match="incompatibles"):
        guard_task("commute", "f", mismatch)


def test_report_exit_code_and_json():
    report = Report(problem={"p": 3}, tasks=[
        TaskResult(command="log", status=Status.certified),
        TaskResult(command="group", status=Status.certified_negative),
    ])
    assert report.exit_code == 1
    assert Report().exit_code == 0
    data = json.loads(report.to_json())
    assert data["tasks"][1]["status"] == "certified-negative"
    assert report.to_json() == report.to_json()
    assert fmt_precision(float("inf")) == "exact"
    assert fmt_precision(None) is None


def test_analyze_chebyshev_cubic():
    report = cmd_analyze(small("cheby"))
    task = report.tasks[0]
    assert task.status == Status.certified_negative
    claims = task.data["claims"]
    assert claims["criterion_A"]["holds"] is False
    assert claims["criterion_B"]["holds"] is True
    assert claims["wideg_shape"]["holds"] is True
    assert claims["root_bound_2"]["holds"] is True
    assert claims["root_bound_3"]["holds"] is True
    assert task.data["wideg"] == {"value": 3, "status": "exact"}
    assert task.data["stability"]["status"] == "certified-stable"


def test_commute_and_semiconj_chebyshev_cubic():
    problem = small("cheby")
    assert cmd_commute(problem).exit_code == 0
    report = cmd_semiconj(problem)
    task = report.tasks[0]
    assert task.status == Status.certified
    assert task.data["extension"]["degree"] == 1
    assert set(task.data["transport"]) == {"1", "2"}
    assert "u0" in task.data


def test_commute_builds_commuter_from_option():
    report = cmd_commute(small("cheby"), a="4")
    assert report.tasks[0].data["a"].startswith("4")
    with pytest.raises(ProblemInputError):
        cmd_commute(small("cheby"), g="u", a="4")


def test_additive_document_runs_clean():
    report = cmd_run(small("additive", cap=12))
    assert [t.command for t in report.tasks] == ["group", "endo"]
    assert report.exit_code == 0


def test_group_and_endo_on_multiplicative_group():
    problem = load_problem("data/problems/gm5.json", Settings(), precision=20, cap=12, total_cap=5)
    group = cmd_group(problem).tasks[0]
    assert group.status == Status.certified
    assert group.data["integrality"]["min_valuation"] == 0
    endo = cmd_endo(problem).tasks[0]
    assert endo.status == Status.certified
    assert endo.data["claims"]["equals_square"]["holds"] is True


def test_isogeny_only_semiconj():
    report = cmd_semiconj(small("chebytwo"))
    task = report.tasks[0]
    assert task.status == Status.certified
    assert "f0" not in task.data
    assert task.data["claims"]["isogeny"]["holds"] is True


def test_selftest_covers_reference_examples():
    report = cmd_selftest(precision=16, cap=12)
    assert [t.target for t in report.tasks] == [name for name, _ in CHECKS]
    by_name = {t.target: t for t in report.tasks}
    for name in ("cheby", "criterion_A", "chebytwo", "negative_control"):
        assert by_name[name].status == Status.certified
    claims = by_name["two_algorithms"].data["claims"]
    assert claims["f0_cube_root_of_unity"]["holds"] is True
    assert claims["f0_roundtrip"]["holds"] is True
    assert claims["f0_roundtrip_log"]["holds"] is not False
