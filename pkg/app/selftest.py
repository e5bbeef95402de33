from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from app.dynamics import check_commute, criterion_A, criterion_B, lubin_log, lubin_log_report, solve_commuting
from app.formal_group import (
    build_group_law,
    check_group_axioms,
    endomorphism,
    integrality_report,
    is_endomorphism,
    un_commuter_check,
)
from app.bivariate import BivarTrunc
from app.padic import RingConfig, certify_equal
from app.report import Report, fmt_precision
from app.semiconj import build_f0, verify_semiconjugacy
from app.series import TruncSeries
from app.settings import DEFAULT_CAP, DEFAULT_PRECISION
from app.tasks import Outcome, guard_task, series_data

Check = Tuple[str, Callable[[int, int], Outcome]]


def _poly(cfg: RingConfig, values, cap: int) -> TruncSeries:
    return TruncSeries.from_values(cfg, values, cap, True)


def _cheby(r: int, D: int) -> Outcome:
    out = Outcome()
    cfg = RingConfig(3, rel_precision=r)
    f = _poly(cfg, [0, 9, 6, 1], D)
    u = _poly(cfg, [0, 4, 1], D)
    res = check_commute(f, u)
    out.claim("commute", res.commute, res.precision)
    out.claim("criterion_B", criterion_B(f, 2).holds)
    sc = build_f0(f, 2)
    out.data["f0"] = series_data(sc.f0)
    cmp = sc.f0.compare(_poly(cfg, [0, 3, 0, 1], D))
    out.claim("f0_is_3X_plus_X3", cmp.equal, cmp.precision)
    out.claim("trivial_extension", sc.extension_degree == 1)
    chk = verify_semiconjugacy(f, sc.h, sc.f0)
    out.claim("semiconjugacy", chk.holds, chk.precision)
    out.claim("multiplier", certify_equal(sc.f0.coeffs[1] ** 2, f.coeffs[1]) is not None)
    return out


def _criterion_a(r: int, D: int) -> Outcome:
    out = Outcome()
    c3, c2 = RingConfig(3, rel_precision=r), RingConfig(2, rel_precision=r)
    out.claim("3X+X^3", criterion_A(_poly(c3, [0, 3, 0, 1], D)).holds)
    neg = criterion_A(_poly(c3, [0, 9, 6, 1], D))
    out.claim("9X+6X^2+X^3_fails_at_1", not neg.holds and neg.witness == 1)
    out.claim("4X+X^2_fails", not criterion_A(_poly(c2, [0, 4, 1], D)).holds)
    return out


def _chebytwo(r: int, D: int) -> Outcome:
    out = Outcome()
    cfg = RingConfig(2, rel_precision=r)
    f = _poly(cfg, [0, 4, 1], D)
    cmp = f.iterate(2).compare(_poly(cfg, [0, 16, 20, 8, 1], D))
    out.claim("iterate_2", cmp.equal, cmp.precision)
    # X²/(1+X) = Σ_{k>=2} (-1)^k X^k
    h = TruncSeries.from_values(cfg, [0, 0] + [(-1) ** k for k in range(2, D + 1)], D, False)
    chk = verify_semiconjugacy(f, h, _poly(cfg, [0, 2, 1], D))
    out.claim("isogeny", chk.holds, chk.precision)
    return out


def _gm5(r: int, D: int) -> Outcome:
    out = Outcome()
    cfg = RingConfig(5, rel_precision=r)
    f = _poly(cfg, [0, 5, 10, 10, 5, 1], D)
    L = lubin_log(f)
    classical = TruncSeries.from_values(cfg, [0] + [Fraction((-1) ** (k + 1), k) for k in range(1, D + 1)], D, False)
    cmp = L.compare(classical)
    out.claim("classical_log", cmp.equal, cmp.precision)
    G = build_group_law(L, min(12, D))
    law = BivarTrunc.from_dict(cfg, G.total_cap, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    cmp = G.S.compare(law)
    out.claim("S_is_X+Y+XY", cmp.equal, cmp.precision)
    square = _poly(cfg, [0, 2, 1], D)
    cmp = endomorphism(G, 2).compare(square)
    out.claim("endo_2", cmp.equal, cmp.precision)
    out.claim("is_endomorphism", is_endomorphism(G, square).holds)
    return out


def _theorem_a(r: int, D: int) -> Outcome:
    out = Outcome()
    cfg = RingConfig(3, rel_precision=min(r, 16))
    f0 = _poly(cfg, [0, 3, 0, 1], D)
    u = solve_commuting(f0, 2)
    out.claim("commuter_integral", u.integral)
    G = build_group_law(lubin_log(f0), min(12, D))
    rep = integrality_report(G)
    out.data["min_valuation"] = fmt_precision(rep.min_valuation)
    out.claim("integral", rep.integral)
    out.claim("axioms", check_group_axioms(G).all_passed)
    cmp = endomorphism(G, 3).compare(f0)
    out.claim("endo_3", cmp.equal, cmp.precision)
    for n in (1, 2):
        out.claim(f"u_{n}", un_commuter_check(G, f0, n).passed)
    return out


def _negative_control(r: int, D: int) -> Outcome:
    out = Outcome()
    cfg = RingConfig(3, rel_precision=r)
    G = build_group_law(lubin_log(_poly(cfg, [0, 9, 6, 1], D)), min(12, D))
    rep = integrality_report(G)
    out.data["worst"] = list(rep.worst) if rep.worst else None
    out.claim("not_integral", not rep.integral)
    return out


def _two_algorithms(r: int, D: int) -> Outcome:
    out = Outcome()
    fixtures = [
        ("3X+X^3", 3, [0, 3, 0, 1]),
        ("(1+X)^5-1", 5, [0, 5, 10, 10, 5, 1]),
        ("5X+X^5+5X^7", 5, [0, 5, 0, 0, 0, 1, 0, 5]),
    ]
    for name, p, values in fixtures:
        rep = lubin_log_report(_poly(RingConfig(p, rel_precision=r), values, D))
        out.claim(name, rep.agreement, rep.precision)
    # aller-retour f₀ = 7X + X^7 -> f = Y(7 + Y²)³ -> f₀ (à une racine cubique de 1 près)
    cfg = RingConfig(7, rel_precision=r)
    f0 = _poly(cfg, [0, 7, 0, 0, 0, 0, 0, 1], D)
    f = _poly(cfg, [0, 343, 0, 147, 0, 21, 0, 1], D)
    sc = build_f0(f, 3)
    original = sc.embedding.series(f0)
    zeta = sc.f0.coeffs[1] / original.coeffs[1]
    out.claim("f0_cube_root_of_unity", (zeta ** 3).agrees(1))
    cmp = sc.f0.compare(original.scalar_mul(zeta))
    out.claim("f0_roundtrip", cmp.equal, cmp.precision)
    rep = lubin_log_report(sc.f0)
    out.claim("f0_roundtrip_log", rep.agreement, rep.precision)
    return out


CHECKS: List[Check] = [
    ("cheby", _cheby),
    ("criterion_A", _criterion_a),
    ("chebytwo", _chebytwo),
    ("multiplicative_group", _gm5),
    ("integrality_instance", _theorem_a),
    ("negative_control", _negative_control),
    ("two_algorithms", _two_algorithms),
]


def cmd_selftest(precision: Optional[int] = None, cap: Optional[int] = None) -> Report:
    """Suite de non-régression sur les exemples de référence."""
    r = precision or DEFAULT_PRECISION
    D = cap or DEFAULT_CAP
    results = [guard_task("selftest", name, lambda fn=fn: fn(r, D)) for name, fn in CHECKS]
    return Report(problem={"selftest": True, "rel_precision": r, "cap": D}, tasks=results)
