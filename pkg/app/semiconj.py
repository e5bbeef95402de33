from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from app.dynamics import check_commute, criterion_B, exact_iterate
from app.errors import HypothesisError, InvariantViolationError, NormalizationRequiredError
from app.extension import Embedding, residue_mth_root
from app.padic import INF, PadicScalar, RingConfig, certify_equal, mth_root_unit, teichmuller
from app.residue_field import Residue
from app.series import SeriesComparison, TruncSeries, series_mth_root_unit
from app.weierstrass import root_valuations, simple_roots_certificate, weierstrass_prep

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemiConjugacy:
    """f∘h = h∘f₀ avec h = X^m, f₀ sur l'extension non ramifiée K([c^{1/m}])."""
    f: TruncSeries
    m: int
    h: TruncSeries
    f0: TruncSeries
    embedding: Embedding
    c: Residue
    c_root: Residue
    precision: Union[int, float]
    pieces: Dict[str, TruncSeries] = field(default_factory=dict)

    @property
    def extension(self) -> RingConfig:
        return self.embedding.target

    @property
    def extension_degree(self) -> int:
        return self.embedding.degree


def _power_identity(f: TruncSeries, f0: TruncSeries, m: int, embedding: Embedding) -> SeriesComparison:
    """f(X^m) = f₀(X)^m, f plongée dans l'extension."""
    lhs = embedding.series(f).substitute_power(m)
    return lhs.compare(f0.power(m))


def build_f0(f: TruncSeries, m: int) -> SemiConjugacy:
    """f₀ = [c^{1/m}] · X · g₀(X^m) · (1 + w₀(X^m)), avec f(X^m) = f₀(X)^m."""
    crit = criterion_B(f, m)
    if not crit.holds:
        raise HypothesisError(f"build_f0 : {crit.diagnosis}")
    cfg = f.config
    split = weierstrass_prep(f)
    g0 = crit.g0
    v = split.unit
    c = v.coeffs[0].residue()
    one_plus_w = v.scalar_mul(teichmuller(c, cfg).invert())

    root = residue_mth_root(c, m, cfg)
    emb = root.embedding
    c_root = teichmuller(root.root, emb.target)
    g0_ext = emb.series(g0)
    inner = g0_ext.substitute_power(m).shift_up(1)

    if v.is_polynomial and v.degree == 0:
        # unité constante : f₀ reste un polynôme
        w0_const = mth_root_unit(one_plus_w.coeffs[0], m, 1)
        one_plus_w0 = TruncSeries.constant(cfg, w0_const, v.cap)
        f0 = inner.scalar_mul(c_root * emb.scalar(w0_const))
    else:
        one_plus_w0 = series_mth_root_unit(one_plus_w, m, 1)
        f0 = (inner * emb.series(one_plus_w0).substitute_power(m)).scalar_mul(c_root)
    f0 = f0.truncate(f.cap)

    check = _power_identity(f, f0, m, emb)
    if not check.equal:
        raise InvariantViolationError(f"f(X^{m}) ≠ f₀(X)^{m} en X^{check.first_failure}")
    b0 = f0.coeffs[1] ** m
    if certify_equal(b0, emb.scalar(f.coeffs[1])) is None:
        raise InvariantViolationError(f"f₀'(0)^{m} = {b0.render()} ≠ f'(0)")
    log.info("f₀ construit sur %s (extension de degré %s)", emb.target.describe(), emb.degree)
    pieces = {"g": split.distinguished, "g0": g0, "v": v,
              "w": one_plus_w - 1, "w0": one_plus_w0 - 1}
    h = TruncSeries.from_values(emb.target, [0] * m + [1], max(f0.cap, m), True)
    return SemiConjugacy(f, m, h, f0, emb, c, root.root, check.precision, pieces)


def build_u0(u: TruncSeries, m: int, f0: TruncSeries, f: Optional[TruncSeries] = None) -> TruncSeries:
    """Unique u₀ = X·(u(X^m)/X^m)^{1/m} de dérivée ≡ 1 mod 𝔪, élément de U_{f₀}."""
    u1 = u.coeffs[1]
    if not u.coeffs[0].is_exact_zero:
        raise HypothesisError("build_u0 : u(0) ≠ 0")
    if not u1.is_unit or u1.residue() != u.config.field.one():
        raise NormalizationRequiredError(
            f"u'(0) = {u1.render()} n'est pas ≡ 1 mod 𝔪 : appliquer corollary_a_normalize")
    if f is not None:
        commute = check_commute(f, u)
        if not commute.commute:
            raise HypothesisError(f"build_u0 : u ne commute pas avec f (X^{commute.first_failure})")
    um = u.substitute_power(m)
    root = series_mth_root_unit(um.shift_down(m), m, 1)
    u0 = root.shift_up(1).truncate(f0.cap)

    if not u0.power(m).compare(um).equal:
        raise InvariantViolationError(f"u₀^{m} ≠ u(X^{m})")
    if certify_equal(u0.coeffs[1] ** m, u1) is None:
        raise InvariantViolationError("u₀'(0)^m ≠ u'(0)")
    commute = check_commute(f0, u0)
    if not commute.commute:
        raise InvariantViolationError(f"u₀ ne commute pas avec f₀ (X^{commute.first_failure})")
    return u0


def lift_commuter(sc: SemiConjugacy, u: TruncSeries) -> TruncSeries:
    """build_u0 après plongement de u dans l'extension de sc."""
    emb = sc.embedding
    return build_u0(emb.series(u), sc.m, sc.f0, emb.series(sc.f))


@dataclass(frozen=True)
class SemiConjugacyCheck:
    holds: bool
    first_failure: Optional[int]
    precision: Union[int, float]


def verify_semiconjugacy(f: TruncSeries, h: TruncSeries, f_S: TruncSeries) -> SemiConjugacyCheck:
    """f∘h = h∘f_S modulo (p^N, X^{cap+1})."""
    if not h.coeffs[0].is_exact_zero:
        raise HypothesisError("verify_semiconjugacy : h(0) ≠ 0")
    if h.is_exact_zero:
        raise HypothesisError("verify_semiconjugacy : h = 0")
    cmp = f.compose(h).compare(h.compose(f_S))
    return SemiConjugacyCheck(cmp.equal, cmp.first_failure, cmp.precision)


@dataclass(frozen=True)
class MultiplicityTransport:
    n: int
    simple: bool
    identity: bool
    root_valuations: List[Tuple[Fraction, int]]
    precision: Union[int, float] = INF

    @property
    def passed(self) -> bool:
        return self.simple and self.identity


def multiplicity_transport_check(f: TruncSeries, m: int, n: int,
                                 sc: Optional[SemiConjugacy] = None) -> MultiplicityTransport:
    """Racines simples de f₀^{∘n} et f^{∘n}(X^m) = f₀^{∘n}(X)^m."""
    if n < 0:
        raise ValueError(f"n = {n} < 0")
    if n == 0:
        return MultiplicityTransport(0, True, True, [])
    if sc is None:
        sc = build_f0(f, m)
    f0n = exact_iterate(sc.f0, n)
    fn = exact_iterate(f, n)
    cert = simple_roots_certificate(f0n)
    check = _power_identity(fn, f0n, m, sc.embedding)
    return MultiplicityTransport(n, cert.simple, check.equal, root_valuations(f0n), check.precision)


def assemble_from_f0(f0: TruncSeries, m: int) -> TruncSeries:
    """f définie par f(X^m) := f₀(X)^m (f₀ ∈ X·O[[X^m]] à un facteur X près)."""
    P = f0.power(m)
    zero = PadicScalar.zero(f0.config)
    for k, c in enumerate(P.coeffs):
        if k % m and certify_equal(c, zero) is None:
            raise HypothesisError(f"f₀^{m} a un coefficient non nul en X^{k} (exposant non multiple de {m})")
    values = [P.coeffs[k] for k in range(0, P.cap + 1, m)]
    return TruncSeries(f0.config, tuple(values), P.is_polynomial)
