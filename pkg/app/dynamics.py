from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from app.errors import (
    HypothesisError,
    InvariantViolationError,
    NotAnMthPowerError,
    PrecisionExhaustedError,
    TheoremViolationError,
    UnsupportedRamifiedRootError,
)
from app.padic import INF, PadicScalar, certify_equal, fdot
from app.series import Coeffs, TruncSeries, _mul_lists, poly_mth_root
from app.weierstrass import (
    WidegResult,
    distinguished_part,
    poly_divmod,
    resultant,
    root_valuations,
    weierstrass_degree,
    weierstrass_prep,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_LIMIT_ITERATIONS = 400


# ---------------------------------------------------------------------------
# Commutation, stabilité
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommuteResult:
    commute: bool
    first_failure: Optional[int]
    precision: Union[int, float]
    cap: int


def check_commute(f: TruncSeries, g: TruncSeries) -> CommuteResult:
    """f∘g ≡ g∘f modulo (p^N, X^{cap+1}) ; sinon premier degré en défaut."""
    cmp = f.compose(g).compare(g.compose(f))
    return CommuteResult(cmp.equal, cmp.first_failure, cmp.precision, cmp.cap)


class StabilityStatus(str, Enum):
    certified_stable = "certified-stable"
    unstable = "unstable"
    unstable_at_precision = "unstable-at-precision"


@dataclass(frozen=True)
class StabilityCertificate:
    status: StabilityStatus
    multiplier: PadicScalar
    invertible: bool
    detail: str

    @property
    def stable(self) -> bool:
        return self.status == StabilityStatus.certified_stable


def root_of_unity_exponent(config) -> int:
    """Exposant e tel que ζ^e = 1 pour toute racine de l'unité de K non ramifié."""
    q = config.field.order
    return (q - 1) * (2 if config.p == 2 else 1)


def is_stable(g: TruncSeries) -> StabilityCertificate:
    """g'(0) ni nul ni racine de l'unité."""
    if not g.coeffs[0].is_exact_zero:
        raise HypothesisError("is_stable : g(0) ≠ 0")
    a = g.coeffs[1]
    if a.is_exact_zero:
        return StabilityCertificate(StabilityStatus.unstable, a, False, "g'(0) = 0")
    if a.unit is None:
        raise PrecisionExhaustedError(f"g'(0) = {a.render()} : non-nullité non certifiée")
    if a.valuation != 0:
        return StabilityCertificate(StabilityStatus.certified_stable, a, False,
                                    f"val(g'(0)) = {a.valuation} ≠ 0")
    if a.exact_value is not None:
        if abs(a.exact_value) == 1:
            return StabilityCertificate(StabilityStatus.unstable, a, True, f"g'(0) = {a.exact_value}")
        return StabilityCertificate(StabilityStatus.certified_stable, a, True,
                                    f"g'(0) = {a.exact_value} rationnel ≠ ±1")
    e = root_of_unity_exponent(a.config)
    w = a ** e - 1
    if w.is_nonzero:
        return StabilityCertificate(StabilityStatus.certified_stable, a, True,
                                    f"g'(0)^{e} - 1 = {w.render()}")
    return StabilityCertificate(StabilityStatus.unstable_at_precision, a, True,
                                f"g'(0)^{e} ≡ 1 modulo p^{w.valuation}")


def _require_noninvertible_stable(f: TruncSeries) -> PadicScalar:
    if not f.coeffs[0].is_exact_zero:
        raise HypothesisError("f(0) ≠ 0")
    b = f.coeffs[1]
    if b.is_exact_zero:
        raise HypothesisError("f'(0) = 0 : f n'est pas stable")
    if b.unit is None:
        raise PrecisionExhaustedError(f"f'(0) = {b.render()} indéterminé")
    if b.valuation < 1:
        raise HypothesisError(f"f'(0) = {b.render()} n'est pas dans l'idéal maximal")
    return b


def _power_lists(f: TruncSeries, cap: int) -> List[Coeffs]:
    """[f^j] pour j = 0..cap (listes de coefficients tronquées)."""
    cfg = f.config
    one = [PadicScalar.one(cfg)] + [PadicScalar.zero(cfg)] * cap
    out = [one, list(f.coeffs[: cap + 1])]
    for _ in range(2, cap + 1):
        out.append(_mul_lists(cfg, out[-1], f.coeffs, cap))
    return out


# ---------------------------------------------------------------------------
# Solveur de commutants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommuterSolution:
    series: TruncSeries
    min_valuation: Union[int, float]
    worst_degree: Optional[int]

    @property
    def integral(self) -> bool:
        return self.min_valuation >= 0


def solve_commuting(f: TruncSeries, a) -> CommuterSolution:
    """
    Unique g = aX + ... avec g∘f = f∘g.

    Degré k : g_k (b^k - b) = Σ_{i>=2} f_i [g^i]_k - Σ_{j<k} g_j [f^j]_k, b = f'(0).
    Les [g^i]_k (i >= 2) ne dépendent que de g_{<k}.
    """
    b = _require_noninvertible_stable(f)
    cfg, cap = f.config, f.cap
    a = PadicScalar.coerce(cfg, a)
    if a.is_exact_zero:
        raise HypothesisError("solve_commuting : a = 0")
    zero = PadicScalar.zero(cfg)
    fpow = _power_lists(f, cap)
    g: Coeffs = [zero, a]
    # gp[i][k] = [g^i]_k, rempli au fur et à mesure
    gp: List[Coeffs] = [[], [zero, a]]
    b_pow = b
    for k in range(2, cap + 1):
        gp[1].append(zero)
        gp.append([zero] * (k + 1))
        for i in range(2, k + 1):
            if len(gp[i]) <= k:
                gp[i].extend([zero] * (k + 1 - len(gp[i])))
            gp[i][k] = fdot(cfg, ((g[j], gp[i - 1][k - j]) for j in range(1, k - i + 2)))
        b_pow = b_pow * b
        pivot = b_pow - b
        if pivot.is_zero:
            raise PrecisionExhaustedError(f"Pivot f'(0)^{k} - f'(0) nul à la précision")
        pairs = [(f.coeffs[i], gp[i][k]) for i in range(2, k + 1) if not f.coeffs[i].is_exact_zero]
        pairs += [(-g[j], fpow[j][k]) for j in range(1, k)]
        gk = fdot(cfg, pairs) / pivot
        g.append(gk)
        gp[1][k] = gk
    series = TruncSeries(cfg, tuple(g), False)
    mv, where = series.min_valuation()
    return CommuterSolution(series, mv, where)


# ---------------------------------------------------------------------------
# Logarithme de Lubin
# ---------------------------------------------------------------------------

def _lubin_log_recursion(f: TruncSeries) -> TruncSeries:
    """L_k (b - b^k) = Σ_{j<k} L_j [f^j]_k, L_1 = 1."""
    b = _require_noninvertible_stable(f)
    cfg, cap = f.config, f.cap
    fpow = _power_lists(f, cap)
    L: Coeffs = [PadicScalar.zero(cfg), PadicScalar.one(cfg)]
    b_pow = b
    for k in range(2, cap + 1):
        b_pow = b_pow * b
        pivot = b - b_pow
        if pivot.is_zero:
            raise PrecisionExhaustedError(f"Pivot f'(0) - f'(0)^{k} nul à la précision")
        s = fdot(cfg, ((L[j], fpow[j][k]) for j in range(1, k)))
        L.append(s / pivot)
    return TruncSeries(cfg, tuple(L), False)


def _lubin_log_limit(f: TruncSeries, max_iterations: int) -> Tuple[TruncSeries, int]:
    """lim f^{∘n}/f'(0)^n : arrêt quand deux itérés consécutifs concordent, plus un pas de confirmation."""
    b = _require_noninvertible_stable(f)
    cfg = f.config
    acc = TruncSeries(cfg, f.coeffs, False)
    inv_b = b.invert()
    scale = inv_b
    previous = acc.scalar_mul(scale)
    for n in range(2, max_iterations + 1):
        acc = f.compose(acc)
        scale = scale * inv_b
        current = acc.scalar_mul(scale)
        if current.agrees(previous):
            acc = f.compose(acc)
            confirm = acc.scalar_mul(scale * inv_b)
            if not confirm.agrees(current):
                raise InvariantViolationError(f"Limite instable après {n} itérations")
            log.debug("lubin_log limite : %s itérations", n + 1)
            return current, n + 1
        previous = current
    raise InvariantViolationError(f"Limite non atteinte en {max_iterations} itérations")


@dataclass(frozen=True)
class LubinLogReport:
    series: TruncSeries          # récursion (résultat principal)
    limit: TruncSeries           # contrôle croisé
    iterations: int
    agreement: Optional[bool]    # None : indéterminé à la précision
    precision: Union[int, float]


def lubin_log_report(f: TruncSeries, max_iterations: int = DEFAULT_MAX_LIMIT_ITERATIONS) -> LubinLogReport:
    L = _lubin_log_recursion(f)
    N, iterations = _lubin_log_limit(f, max_iterations)
    try:
        cmp = L.compare(N)
    except PrecisionExhaustedError:
        return LubinLogReport(L, N, iterations, None, INF)
    if not cmp.equal:
        raise InvariantViolationError(
            f"Logarithme : récursion et limite divergent en X^{cmp.first_failure}")
    return LubinLogReport(L, N, iterations, True, cmp.precision)


def lubin_log(f: TruncSeries) -> TruncSeries:
    """L = X + ... avec L∘f = f'(0)·L, contrôlé par les deux algorithmes."""
    return lubin_log_report(f).series


@dataclass(frozen=True)
class IntegralityCheck:
    integral: bool
    min_valuation: Union[int, float]
    witness: Optional[int]
    exact: bool  # False : certifié seulement jusqu'au cap


def log_derivative_integral_check(L: TruncSeries) -> IntegralityCheck:
    """L' ∈ O_K[[X]] ?"""
    Lp = L.derivative()
    for k, c in enumerate(Lp.coeffs):
        if c.unit is None and not c.is_exact_zero and c.valuation < 0:
            raise PrecisionExhaustedError(f"Coefficient X^{k} de L' = {c.render()} : intégralité indéterminée")
    mv, where = Lp.min_valuation()
    integral = mv >= 0
    return IntegralityCheck(integral, mv, None if integral else where, Lp.is_polynomial)


# ---------------------------------------------------------------------------
# Critères A et B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    witness: Optional[int] = None
    exact: bool = True
    diagnosis: str = ""


def criterion_A(f: TruncSeries) -> CriterionResult:
    """f'(X)/f'(0) ∈ 1 + X·O_K[[X]] : val(f'_k) >= val(f'(0)) pour k >= 1."""
    b = _require_noninvertible_stable(f)
    fp = f.derivative()
    v0 = b.valuation
    for k in range(1, fp.cap + 1):
        c = fp.coeffs[k]
        if c.is_nonzero and c.valuation < v0:
            return CriterionResult(False, k, fp.is_polynomial,
                                   f"val(f'_{k}) = {c.valuation} < val(f'(0)) = {v0}")
        if c.unit is None and not c.is_exact_zero and c.valuation < v0:
            raise PrecisionExhaustedError(f"f'_{k} = {c.render()} : comparaison à p^{v0} indéterminée")
    return CriterionResult(True, None, fp.is_polynomial, "f'/f'(0) entier")


@dataclass(frozen=True)
class CriterionBResult:
    holds: bool
    diagnosis: str
    g: Optional[TruncSeries] = None
    g0: Optional[TruncSeries] = None
    derivative_part: Optional[TruncSeries] = None
    precision: Union[int, float] = INF


def criterion_B(f: TruncSeries, m: int) -> CriterionBResult:
    """Racines de f' ⊂ racines de f, avec g = g₀^m et g₀ séparable."""
    _require_noninvertible_stable(f)
    if m < 2:
        raise HypothesisError(f"criterion_B : m = {m} < 2")
    if math.gcd(m, f.config.p) != 1:
        raise UnsupportedRamifiedRootError(f"criterion_B : p = {f.config.p} divise m = {m}")
    q = weierstrass_degree(f).require()
    split = weierstrass_prep(f)
    g = split.distinguished
    if g.degree % m:
        return CriterionBResult(False, f"deg g = {g.degree} non divisible par {m}", g)
    try:
        g0 = poly_mth_root(g, m)
    except NotAnMthPowerError as ex:
        return CriterionBResult(False, f"g n'est pas une puissance {m}-ième : {ex}", g)
    if m * g0.degree != q - 1:
        raise InvariantViolationError(f"m·deg(g₀) = {m * g0.degree} ≠ q - 1 = {q - 1}")
    precision: Union[int, float] = INF
    if g0.degree >= 1:
        res = resultant(g0, g0.derivative())
        n = certify_equal(res, PadicScalar.zero(f.config))
        if n is not None:
            return CriterionBResult(False, f"g₀ non séparable (Res ≡ 0 mod p^{n})", g, g0)
        log.debug("criterion_B : Res(g₀, g₀') = %s", res.render())
    H = distinguished_part(f.derivative()).distinguished
    if H.degree > 0:
        P = TruncSeries.polynomial(f.config, [0] + list(g0.coeffs[: g0.degree + 1]), g0.cap)
        _, rem = poly_divmod(P.power(H.degree), H)
        for k, c in enumerate(rem.coeffs[: H.degree]):
            n = certify_equal(c, PadicScalar.zero(f.config))
            if n is None:
                return CriterionBResult(False, f"une racine de f' n'est pas racine de f (reste en X^{k})",
                                        g, g0, H)
            precision = min(precision, n)
    return CriterionBResult(True, "racines de f' ⊂ racines de f", g, g0, H, precision)


def wideg_shape_check(f: TruncSeries) -> Tuple[int, bool, Optional[int]]:
    """wideg(f) = p^d et f ≡ g(X^{p^d}) mod 𝔪 ; renvoie (d, forme, premier indice fautif)."""
    p = f.config.p
    q = weierstrass_degree(f).require()
    d, t = 0, q
    while t % p == 0:
        t //= p
        d += 1
    if t != 1:
        raise TheoremViolationError(f"wideg = {q} n'est pas une puissance de {p}")
    step = p ** d
    for i in range(f.cap + 1):
        if i % step == 0:
            continue
        c = f.coeffs[i]
        if c.is_nonzero and c.valuation < 1:
            return d, False, i
        if c.unit is None and not c.is_exact_zero and c.valuation < 1:
            raise PrecisionExhaustedError(f"Coefficient X^{i} = {c.render()} : appartenance à 𝔪 indéterminée")
    return d, True, None


def exact_iterate(f: TruncSeries, n: int) -> TruncSeries:
    """f^{∘n} ; pour un polynôme, cap agrandi à deg^n pour rester exact."""
    if f.is_polynomial:
        return f.extend(max(f.cap, max(f.degree, 1) ** n)).iterate(n)
    return f.iterate(n)


@dataclass(frozen=True)
class RootBoundCheck:
    n: int
    wideg: int
    bound: Fraction
    root_valuations: List[Tuple[Fraction, int]]
    holds: bool


def newton_root_bound_check(f: TruncSeries, n: int) -> RootBoundCheck:
    """Racines z de f^{∘n} dans le disque ouvert : val(z) >= 1/(q^n - 1), q = wideg(f)."""
    if n < 1:
        raise ValueError(f"n = {n} < 1")
    _require_noninvertible_stable(f)
    q = weierstrass_degree(f).require()
    fn = exact_iterate(f, n)
    qn = weierstrass_degree(fn).require()
    if qn != q ** n:
        raise TheoremViolationError(f"wideg(f^∘{n}) = {qn} ≠ {q}^{n}")
    bound = Fraction(1, q ** n - 1)
    vals = root_valuations(fn)
    return RootBoundCheck(n, q, bound, vals, all(v >= bound for v, _ in vals))


def corollary_a_normalize(u: TruncSeries, exponent: Optional[int] = None) -> TruncSeries:
    """u^{∘e} avec e = p^s - 1 (doublé pour p = 2) : u'(0) ramené dans 1 + 𝔪 (1 + 4O pour p = 2)."""
    if exponent is None:
        exponent = root_of_unity_exponent(u.config)
    if exponent < 1:
        raise ValueError(f"Exposant {exponent} invalide")
    return u.iterate(exponent)


# ---------------------------------------------------------------------------
# Système dynamique
# ---------------------------------------------------------------------------

@dataclass
class DynamicalSystem:
    """f non inversible stable et commutants enregistrés (éléments de U_f)."""
    f: TruncSeries
    commuters: List[TruncSeries] = field(default_factory=list)

    def __post_init__(self):
        cert = is_stable(self.f)
        if not cert.stable or cert.invertible:
            raise HypothesisError(f"f n'est pas non inversible stable ({cert.detail})")

    @cached_property
    def multiplier(self) -> PadicScalar:
        return self.f.coeffs[1]

    @cached_property
    def wideg(self) -> WidegResult:
        return weierstrass_degree(self.f)

    @cached_property
    def stability(self) -> StabilityCertificate:
        return is_stable(self.f)

    @cached_property
    def logarithm(self) -> LubinLogReport:
        return lubin_log_report(self.f)

    def register(self, u: TruncSeries) -> CommuteResult:
        """Ajoute u à U_f après vérification (u'(0) unité, u∘f = f∘u)."""
        if not u.coeffs[0].is_exact_zero:
            raise HypothesisError("register : u(0) ≠ 0")
        if not u.coeffs[1].is_unit:
            raise HypothesisError(f"register : u'(0) = {u.coeffs[1].render()} n'est pas une unité")
        result = check_commute(self.f, u)
        if not result.commute:
            raise HypothesisError(f"register : u ne commute pas avec f (X^{result.first_failure})")
        self.commuters.append(u)
        log.info("commutant enregistré : u'(0) = %s", u.coeffs[1].render())
        return result

    def shape_check(self) -> Tuple[int, bool, Optional[int]]:
        if not any(is_stable(u).stable for u in self.commuters):
            raise HypothesisError("wideg_shape_check : aucun commutant stable inversible enregistré")
        return wideg_shape_check(self.f)
