from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Union

from app.bivariate import BivarTrunc, Comparison, Monomial, TrivarAccumulator, compare_dicts, compose_univariate, monomials
from app.dynamics import CommuteResult, check_commute, log_derivative_integral_check
from app.errors import CapTooSmallError, HypothesisError, PrecisionExhaustedError
from app.padic import INF, Number, PadicScalar, certify_equal, padic_power
from app.series import TruncSeries
from app.settings import Settings

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Loi de groupe formel S(X, Y) = L^{-1}(L(X) + L(Y))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralityReport:
    integral: bool
    min_valuation: Union[int, float]
    worst: Optional[Monomial]
    column_minima: Dict[int, Union[int, float]]
    indeterminate: List[Monomial]


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: Optional[bool]  # None : indéterminé à la précision
    first_failure: Optional[Monomial] = None
    precision: Union[int, float] = INF


@dataclass(frozen=True)
class AxiomReport:
    identity: AxiomCheck
    commutativity: AxiomCheck
    associativity: AxiomCheck

    @property
    def checks(self) -> List[AxiomCheck]:
        return [self.identity, self.commutativity, self.associativity]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class GroupLaw:
    S: BivarTrunc
    L: TruncSeries
    exp: TruncSeries  # L^{∘-1}

    @property
    def config(self):
        return self.S.config

    @property
    def total_cap(self) -> int:
        return self.S.total_cap

    @cached_property
    def integrality(self) -> IntegralityReport:
        return integrality_report(self)

    @cached_property
    def axioms(self) -> AxiomReport:
        return check_group_axioms(self)


def build_group_law(L: TruncSeries, total_cap: Optional[int] = None) -> GroupLaw:
    """S(X, Y) tronquée en degré total <= total_cap (défaut : cap // 2)."""
    if not L.coeffs[0].is_exact_zero:
        raise HypothesisError("build_group_law : L(0) ≠ 0")
    if not L.coeffs[1].agrees(1):
        raise HypothesisError(f"build_group_law : L'(0) = {L.coeffs[1].render()} ≠ 1")
    N = total_cap if total_cap is not None else Settings(cap=L.cap).effective_total_cap()
    if N > L.cap and not L.is_polynomial:
        raise CapTooSmallError(f"Degré total {N} > cap {L.cap} du logarithme")
    M = L.comp_inverse()
    B = BivarTrunc.from_univariate(L, N, 0) + BivarTrunc.from_univariate(L, N, 1)
    S = compose_univariate(M, B)
    log.debug("loi de groupe : %s monômes non nuls (degré total %s)", len(S.coeffs), N)
    return GroupLaw(S, L, M)


def integrality_report(G: GroupLaw) -> IntegralityReport:
    """Coefficients de S dans O_K ? Les O(p^v) avec v < 0 sont listés à part."""
    best: Union[int, float] = INF
    worst = None
    columns: Dict[int, Union[int, float]] = {}
    indeterminate: List[Monomial] = []
    for mono in monomials(G.total_cap):
        c = G.S.coeffs.get(mono)
        if c is None:
            continue
        if c.is_nonzero:
            j = mono[1]
            columns[j] = min(columns.get(j, INF), c.valuation)
            if c.valuation < best:
                best, worst = c.valuation, mono
        elif c.valuation < 0:
            indeterminate.append(mono)
    return IntegralityReport(best >= 0, best, worst, columns, indeterminate)


def _digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


@dataclass(frozen=True)
class FactorialBoundCheck:
    holds: bool
    first_failure: Optional[Monomial]
    log_derivative_integral: bool


def factorial_bound_check(G: GroupLaw) -> FactorialBoundCheck:
    """val(coefficient de s_j) >= -val_p(j!) = -(j - s_p(j))/(p - 1)."""
    p = G.config.p
    for mono in monomials(G.total_cap):
        c = G.S.coeffs.get(mono)
        if c is None or not c.is_nonzero:
            continue
        j = mono[1]
        if c.valuation < -Fraction(j - _digit_sum(j, p), p - 1):
            return FactorialBoundCheck(False, mono, log_derivative_integral_check(G.L).integral)
    return FactorialBoundCheck(True, None, log_derivative_integral_check(G.L).integral)


def _axiom(name: str, compute) -> AxiomCheck:
    try:
        cmp: Comparison = compute()
    except PrecisionExhaustedError as ex:
        log.info("axiome %s indéterminé : %s", name, ex)
        return AxiomCheck(name, None)
    return AxiomCheck(name, cmp.equal, cmp.first_failure, cmp.precision)


def _associativity(S: BivarTrunc) -> Comparison:
    """S(S(X,Y),Z) et S(X,S(Y,Z)) développés tranche par tranche."""
    N = S.total_cap
    left = TrivarAccumulator(S.config, N)
    right = TrivarAccumulator(S.config, N)
    rows = S.transpose()
    for j in range(N + 1):
        # Σ_j s_j(S(X,Y)) Z^j
        left.place(compose_univariate(S.column(j), S.truncate(N - j)), 2, j)
        # Σ_i X^i t_i(S(Y,Z)), t_i(Y) = Σ_j c_{i,j} Y^j
        right.place(compose_univariate(rows.column(j), S.truncate(N - j)), 0, j)
    return left.compare(right)


def check_group_axioms(G: GroupLaw) -> AxiomReport:
    S = G.S
    cfg, N = S.config, S.total_cap
    axes = {m: c for m, c in S.coeffs.items() if m[0] == 0 or m[1] == 0}
    target = {(1, 0): PadicScalar.one(cfg), (0, 1): PadicScalar.one(cfg)}
    return AxiomReport(
        _axiom("identity", lambda: compare_dicts(cfg, axes, target, N, 2)),
        _axiom("commutativity", lambda: S.compare(S.transpose())),
        _axiom("associativity", lambda: _associativity(S)),
    )


# ---------------------------------------------------------------------------
# Endomorphismes
# ---------------------------------------------------------------------------

def endomorphism(G: GroupLaw, a: Number) -> TruncSeries:
    """[a](X) = L^{-1}(a·L(X))."""
    a = PadicScalar.coerce(G.config, a)
    if a.is_exact_zero:
        return TruncSeries.zero(G.config, G.L.cap)
    return G.exp.compose(G.L.scalar_mul(a))


@dataclass(frozen=True)
class EndomorphismCheck:
    holds: bool
    first_failure: Optional[Monomial]
    precision: Union[int, float]


def is_endomorphism(G: GroupLaw, g: TruncSeries) -> EndomorphismCheck:
    """S(g(X), g(Y)) = g(S(X, Y)) en degré total <= total_cap."""
    if not g.coeffs[0].is_exact_zero:
        raise HypothesisError("is_endomorphism : g(0) ≠ 0")
    N = G.total_cap
    left = G.S.substitute(BivarTrunc.from_univariate(g, N, 0), BivarTrunc.from_univariate(g, N, 1))
    cmp = left.compare(compose_univariate(g, G.S))
    return EndomorphismCheck(cmp.equal, cmp.first_failure, cmp.precision)


@dataclass(frozen=True)
class UnCommuterCheck:
    series: TruncSeries
    derivative_ok: bool
    commute: CommuteResult

    @property
    def passed(self) -> bool:
        return self.derivative_ok and self.commute.commute


def un_commuter_check(G: GroupLaw, f: TruncSeries, n: int) -> UnCommuterCheck:
    """u_n = S(X, f^{∘n}(X)) : u_n'(0) = 1 + f'(0)^n et u_n∘f = f∘u_n."""
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    X = TruncSeries(f.config, TruncSeries.X(f.config, f.cap).coeffs, False)
    u = G.S.evaluate_on_series(X, f.iterate(n))
    expected = f.coeffs[1] ** n + 1
    derivative_ok = certify_equal(u.coeffs[1], expected) is not None
    return UnCommuterCheck(u, derivative_ok, check_commute(f, u))


def padic_iterate(G: GroupLaw, u: TruncSeries, a) -> TruncSeries:
    """u^{∘a} pour a ∈ Z_p, réalisé comme [u'(0)^a] (u'(0) unité principale)."""
    b = u.coeffs[1]
    if not b.is_unit or b.residue() != G.config.field.one():
        raise HypothesisError(f"padic_iterate : u'(0) = {b.render()} n'est pas ≡ 1 mod 𝔪")
    return endomorphism(G, padic_power(b, a))


def evaluate_on_series(S: Union[GroupLaw, BivarTrunc], a: TruncSeries, b: TruncSeries) -> TruncSeries:
    law = S.S if isinstance(S, GroupLaw) else S
    return law.evaluate_on_series(a, b)


def compose_bivariate(g: TruncSeries, S: Union[GroupLaw, BivarTrunc]) -> BivarTrunc:
    law = S.S if isinstance(S, GroupLaw) else S
    return compose_univariate(g, law)
