from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Union

from app.dynamics import (
    DynamicalSystem,
    check_commute,
    criterion_A,
    criterion_B,
    is_stable,
    log_derivative_integral_check,
    lubin_log,
    newton_root_bound_check,
    lubin_log_report,
    solve_commuting,
)
from app.errors import (
    ConfigMismatchError,
    HypothesisError,
    InvariantViolationError,
    PadynError,
    PrecisionExhaustedError,
    ProblemInputError,
)
from app.formal_group import (
    GroupLaw,
    build_group_law,
    check_group_axioms,
    endomorphism,
    factorial_bound_check,
    integrality_report,
)
from app.padic import INF
from app.problem import CommuteTask, Problem
from app.report import Report, Status, TaskResult, fmt_precision
from app.semiconj import build_f0, lift_commuter, multiplicity_transport_check, verify_semiconjugacy
from app.series import TruncSeries
from app.weierstrass import newton_polygon, root_valuations, weierstrass_degree

log = logging.getLogger(__name__)


# ------------------------
# Accumulation des prédicats certifiés
# ------------------------

@dataclass
class Outcome:
    data: Dict[str, Any] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    unknown: List[str] = field(default_factory=list)
    precision: Union[int, float] = INF

    def claim(self, name: str, holds: Optional[bool], precision: Union[int, float] = INF) -> None:
        self.data.setdefault("claims", {})[name] = {"holds": holds, "precision": fmt_precision(precision)}
        if holds is None:
            self.unknown.append(name)
        elif not holds:
            self.failures.append(name)
        self.precision = min(self.precision, precision)

    @property
    def status(self) -> Status:
        if self.failures:
            return Status.certified_negative
        if self.unknown:
            return Status.indeterminate
        return Status.certified

    @property
    def diagnosis(self) -> str:
        parts = []
        if self.failures:
            parts.append("faux : " + ", ".join(self.failures))
        if self.unknown:
            parts.append("indéterminé : " + ", ".join(self.unknown))
        return " ; ".join(parts)


def series_data(f: TruncSeries) -> Dict[str, Any]:
    return {"coeffs": f.to_strings(), "cap": f.cap, "exact": f.is_polynomial}


def _frac(x: Fraction) -> str:
    return str(x)


def guard_task(command: str, target: str, fn: Callable[[], Outcome]) -> TaskResult:
    try:
        out = fn()
    except ProblemInputError:
        raise
    except ConfigMismatchError as ex:
        raise ProblemInputError(f"{command}({target}) : anneaux incompatibles ({ex})") from ex
    except PrecisionExhaustedError as ex:
        log.warning("%s(%s) : précision insuffisante (%s)", command, target, ex)
        return TaskResult(command=command, target=target, status=Status.indeterminate, diagnosis=str(ex))
    except InvariantViolationError as ex:
        # contrôle interne en échec : aucun certificat, ni positif ni négatif
        log.error("%s(%s) : contrôle interne en échec (%s)", command, target, ex)
        return TaskResult(command=command, target=target, status=Status.indeterminate,
                          diagnosis=f"erreur interne : {type(ex).__name__}: {ex}")
    except PadynError as ex:
        log.info("%s(%s) : %s", command, target, ex)
        return TaskResult(command=command, target=target, status=Status.certified_negative,
                          diagnosis=f"{type(ex).__name__}: {ex}")
    return TaskResult(command=command, target=target, status=out.status, diagnosis=out.diagnosis,
                      precision=fmt_precision(out.precision), data=out.data)


# ------------------------
# Exécuteurs par commande
# ------------------------

def _analyze(problem: Problem, task) -> Outcome:
    out = Outcome()
    f = problem.get(task.f)
    out.data["f"] = series_data(f)
    wd = weierstrass_degree(f)
    out.data["wideg"] = {"value": wd.value, "status": wd.status}

    cert = is_stable(f)
    out.data["stability"] = {"status": cert.status.value, "multiplier": cert.multiplier.render(),
                             "invertible": cert.invertible, "detail": cert.detail}
    out.claim("stable", None if cert.status.value == "unstable-at-precision" else cert.stable)

    poly = newton_polygon(f)
    out.data["newton_polygon"] = {
        "vertices": [[i, _frac(v)] for i, v in poly.vertices],
        "slopes": [[_frac(s), n] for s, n in poly.slopes],
    }
    if wd.finite:
        out.data["root_valuations"] = [[_frac(v), n] for v, n in root_valuations(f)]

    if cert.stable and not cert.invertible:
        crit = criterion_A(f)
        out.data["criterion_A"] = {"holds": crit.holds, "witness": crit.witness, "exact": crit.exact,
                                   "diagnosis": crit.diagnosis}
        out.claim("criterion_A", crit.holds)
        if task.m is not None:
            cb = criterion_B(f, task.m)
            out.data["criterion_B"] = {"holds": cb.holds, "diagnosis": cb.diagnosis,
                                       "g0": series_data(cb.g0) if cb.g0 is not None else None}
            out.claim("criterion_B", cb.holds, cb.precision)
        if task.commuter is not None:
            ds = DynamicalSystem(f)
            ds.register(problem.get(task.commuter))
            d, shape, witness = ds.shape_check()
            out.data["wideg_shape"] = {"d": d, "holds": shape, "witness": witness}
            out.claim("wideg_shape", shape)
            for n in (1, 2, 3):
                rb = newton_root_bound_check(f, n)
                out.data.setdefault("root_bound", {})[str(n)] = {
                    "bound": _frac(rb.bound),
                    "root_valuations": [[_frac(v), k] for v, k in rb.root_valuations],
                }
                out.claim(f"root_bound_{n}", rb.holds)
    return out


def _log(problem: Problem, task) -> Outcome:
    out = Outcome()
    rep = lubin_log_report(problem.get(task.f))
    out.data["L"] = series_data(rep.series)
    out.data["limit_iterations"] = rep.iterations
    out.claim("two_algorithms_agree", rep.agreement, rep.precision)
    integ = log_derivative_integral_check(rep.series)
    out.data["log_derivative"] = {"min_valuation": fmt_precision(integ.min_valuation),
                                  "witness": integ.witness, "exact": integ.exact}
    out.claim("log_derivative_integral", integ.integral)
    return out


def _law(problem: Problem, task) -> GroupLaw:
    L = problem.get(task.log) if task.log else lubin_log(problem.get(task.f))
    return build_group_law(L, task.total_cap or problem.total_cap)


def _group(problem: Problem, task) -> Outcome:
    out = Outcome()
    G = _law(problem, task)
    out.data["total_cap"] = G.total_cap
    out.data["S"] = G.S.to_strings()
    for check in check_group_axioms(G).checks:
        out.data.setdefault("axioms", {})[check.name] = {
            "passed": check.passed,
            "first_failure": list(check.first_failure) if check.first_failure else None,
        }
        out.claim(f"axiom_{check.name}", check.passed, check.precision)
    rep = integrality_report(G)
    out.data["integrality"] = {
        "min_valuation": fmt_precision(rep.min_valuation),
        "worst": list(rep.worst) if rep.worst else None,
        "column_minima": {str(j): fmt_precision(v) for j, v in sorted(rep.column_minima.items())},
        "indeterminate": [list(m) for m in rep.indeterminate],
    }
    out.claim("integral", rep.integral)
    fb = factorial_bound_check(G)
    out.data["factorial_bound"] = {"holds": fb.holds, "applicable": fb.log_derivative_integral,
                                   "first_failure": list(fb.first_failure) if fb.first_failure else None}
    if fb.log_derivative_integral:
        out.claim("factorial_bound", fb.holds)
    return out


def _endo(problem: Problem, task) -> Outcome:
    out = Outcome()
    G = _law(problem, task)
    a = problem.scalar(task.a)
    e = endomorphism(G, a)
    out.data["a"] = a.render()
    out.data["endomorphism"] = series_data(e)
    mv, where = e.min_valuation()
    out.data["min_valuation"] = fmt_precision(mv)
    out.claim("integral", mv >= 0)
    if task.compare:
        cmp = e.compare(problem.get(task.compare))
        out.data["first_failure"] = cmp.first_failure
        out.claim(f"equals_{task.compare}", cmp.equal, cmp.precision)
    return out


def _commute(problem: Problem, task) -> Outcome:
    out = Outcome()
    f = problem.get(task.f)
    if task.g is not None:
        res = check_commute(f, problem.get(task.g))
        out.data["first_failure"] = res.first_failure
        out.claim("commute", res.commute, res.precision)
    else:
        a = problem.scalar(task.a)
        sol = solve_commuting(f, a)
        out.data["a"] = a.render()
        out.data["commuter"] = series_data(sol.series)
        out.data["min_valuation"] = fmt_precision(sol.min_valuation)
        out.data["worst_degree"] = sol.worst_degree
        out.claim("integral", sol.integral)
    return out


def _semiconj(problem: Problem, task) -> Outcome:
    out = Outcome()
    f = problem.get(task.f)
    if task.isogeny is not None:
        chk = verify_semiconjugacy(f, problem.get(task.isogeny.h), problem.get(task.isogeny.target))
        out.data["isogeny"] = {"h": task.isogeny.h, "target": task.isogeny.target,
                               "first_failure": chk.first_failure}
        out.claim("isogeny", chk.holds, chk.precision)
    if task.m is None:
        return out

    sc = build_f0(f, task.m)
    out.data["f0"] = series_data(sc.f0)
    out.data["extension"] = {"degree": sc.extension_degree, "ring": sc.extension.describe(),
                             "embedding": sc.embedding.describe()}
    out.data["c"] = list(sc.c)
    out.data["c_root"] = list(sc.c_root)
    out.data["f0_multiplier"] = sc.f0.coeffs[1].render()
    out.claim("power_identity", True, sc.precision)

    emb = sc.embedding
    chk = verify_semiconjugacy(emb.series(f), sc.h, sc.f0)
    out.claim("semiconjugacy", chk.holds, chk.precision)

    for n in range(1, task.transport + 1):
        mt = multiplicity_transport_check(f, task.m, n, sc)
        out.data.setdefault("transport", {})[str(n)] = {
            "simple": mt.simple, "identity": mt.identity,
            "root_valuations": [[_frac(v), k] for v, k in mt.root_valuations],
        }
        out.claim(f"transport_{n}", mt.passed, mt.precision)

    if task.u is not None:
        try:
            u0 = lift_commuter(sc, problem.get(task.u))
        except HypothesisError as ex:
            out.data["u0_error"] = f"{type(ex).__name__}: {ex}"
            out.claim("u0", False)
        else:
            out.data["u0"] = series_data(u0)
            out.claim("u0", True)
    return out


RUNNERS: Dict[str, Callable[[Problem, Any], Outcome]] = {
    "analyze": _analyze,
    "log": _log,
    "group": _group,
    "endo": _endo,
    "commute": _commute,
    "semiconj": _semiconj,
}


def run_tasks(problem: Problem, tasks: List) -> Report:
    results = []
    for task in tasks:
        runner = RUNNERS[task.command]
        target = getattr(task, "log", None) or task.f
        results.append(guard_task(task.command, target, lambda: runner(problem, task)))
    return Report(problem=problem.describe(), tasks=results)


# ------------------------
# API des commandes
# ------------------------

def cmd_analyze(problem: Problem, m: Optional[int] = None) -> Report:
    tasks = problem.tasks_for("analyze")
    if m is not None:
        tasks = [t.model_copy(update={"m": m}) for t in tasks]
    return run_tasks(problem, tasks)


def cmd_log(problem: Problem) -> Report:
    return run_tasks(problem, problem.tasks_for("log"))


def cmd_group(problem: Problem) -> Report:
    return run_tasks(problem, problem.tasks_for("group"))


def cmd_endo(problem: Problem, a: Optional[str] = None) -> Report:
    tasks = problem.tasks_for("endo")
    if a is not None:
        tasks = [t.model_copy(update={"a": a}) for t in tasks]
    return run_tasks(problem, tasks)


def cmd_commute(problem: Problem, g: Optional[str] = None, a: Optional[str] = None) -> Report:
    tasks = [t for t in problem.document.tasks if t.command == "commute"]
    if g is not None or a is not None:
        if g is not None and a is not None:
            raise ProblemInputError("commute : g et a sont exclusifs")
        tasks = [t.model_copy(update={"g": g, "a": a}) for t in tasks] or [CommuteTask(command="commute", g=g, a=a)]
    if not tasks:
        raise ProblemInputError("commute : préciser g ou a (document ou option)")
    return run_tasks(problem, tasks)


def cmd_semiconj(problem: Problem, m: Optional[int] = None) -> Report:
    tasks = problem.tasks_for("semiconj")
    if m is not None:
        tasks = [t.model_copy(update={"m": m}) for t in tasks]
    return run_tasks(problem, tasks)


def cmd_run(problem: Problem) -> Report:
    """Toutes les tâches du document, dans l'ordre du document."""
    return run_tasks(problem, list(problem.document.tasks))
