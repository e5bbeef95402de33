from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from app.errors import (
    CapTooSmallError,
    HypothesisError,
    InfiniteWidegError,
    InvariantViolationError,
    PrecisionExhaustedError,
)
from app.padic import INF, PadicScalar, RingConfig, certify_equal, fdot
from app.series import Coeffs, TruncSeries, _mul_lists, inverse_lists

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Degré de Weierstrass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WidegResult:
    value: Optional[int]
    status: str  # "exact" | "infinite" (polynôme ≡ 0 mod 𝔪) | "beyond-cap"

    @property
    def finite(self) -> bool:
        return self.value is not None

    def require(self) -> int:
        if self.value is None:
            raise InfiniteWidegError(f"Degré de Weierstrass {self.status}")
        return self.value


def weierstrass_degree(f: TruncSeries) -> WidegResult:
    """Plus petit i avec f_i unité certifiée."""
    for k, c in enumerate(f.coeffs):
        if c.is_unit:
            return WidegResult(k, "exact")
        if c.is_nonzero and c.valuation < 0:
            raise HypothesisError(f"Coefficient X^{k} = {c.render()} non entier")
        if c.unit is None and not c.is_exact_zero and c.valuation < 1:
            raise PrecisionExhaustedError(f"Coefficient X^{k} = {c.render()} : unité ou non ?")
    return WidegResult(None, "infinite" if f.is_polynomial else "beyond-cap")


# ---------------------------------------------------------------------------
# Division de polynômes
# ---------------------------------------------------------------------------

def _divmod_lists(config: RingConfig, a: Sequence[PadicScalar],
                  b: Sequence[PadicScalar]) -> Tuple[Coeffs, Coeffs]:
    """Division euclidienne par b unitaire (b[-1] = 1)."""
    nb = len(b) - 1
    rem = list(a)
    if len(rem) <= nb:
        return [PadicScalar.zero(config)], rem + [PadicScalar.zero(config)] * (nb - len(rem))
    quo = [PadicScalar.zero(config)] * (len(rem) - nb)
    for k in range(len(rem) - 1, nb - 1, -1):
        c = rem[k]
        quo[k - nb] = c
        rem[k] = PadicScalar.zero(config)
        if c.is_exact_zero:
            continue
        for i in range(nb):
            if not b[i].is_exact_zero:
                rem[k - nb + i] = rem[k - nb + i] - c * b[i]
    return quo, rem[:nb]


def poly_divmod(a: TruncSeries, b: TruncSeries) -> Tuple[TruncSeries, TruncSeries]:
    """(q, r) avec a = q·b + r, deg r < deg b ; b polynôme unitaire."""
    if not (a.is_polynomial and b.is_polynomial):
        raise HypothesisError("poly_divmod : polynômes attendus")
    nb = b.degree
    if nb < 0 or not b.coeffs[nb].agrees(1):
        raise HypothesisError(f"poly_divmod : diviseur {b.render()} non unitaire")
    bl = list(b.coeffs[: nb + 1])
    bl[-1] = PadicScalar.one(a.config)
    quo, rem = _divmod_lists(a.config, a.coeffs[: max(a.degree, 0) + 1], bl)
    cap = max(a.cap, b.cap)
    return (TruncSeries.from_values(a.config, quo, cap, True),
            TruncSeries.from_values(a.config, rem, cap, True))


# ---------------------------------------------------------------------------
# Préparation de Weierstrass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassSplit:
    """f = X^order · p^content_valuation · g · v, g distingué, v unité."""
    distinguished: TruncSeries
    unit: TruncSeries
    content_valuation: int = 0
    order: int = 1

    @property
    def degree(self) -> int:
        return self.distinguished.degree

    def recombine(self) -> TruncSeries:
        prod = self.distinguished * self.unit
        if self.content_valuation:
            prod = prod.scalar_mul(PadicScalar.from_int(prod.config, prod.config.p ** self.content_valuation))
        return prod.shift_up(self.order) if self.order else prod


def _abs_cap(x: PadicScalar, N: int) -> PadicScalar:
    if x.absolute_precision <= N:
        return x
    if x.unit is None:
        return PadicScalar.zero_at(x.config, N)
    return x.truncate_precision(N - x.valuation)


def _split(F: TruncSeries, n: int) -> Tuple[TruncSeries, TruncSeries]:
    """
    F = g · v, g unitaire de degré n à coefficients non dominants dans 𝔪.

    Relèvement de Hensel par divisions : F = g h + R, puis
    g <- g + (R · H mod g) avec H = 1/h mod X^n ; chaque pas gagne un chiffre.
    Pour une série tronquée, la queue inconnue est représentée par O(p^0)
    jusqu'au cap de travail W, d'où une précision honnête sur g et v.
    """
    cfg = F.config
    r = cfg.rel_precision
    C = F.cap
    coeffs = list(F.coeffs)
    if F.is_polynomial:
        N = F.degree
        coeffs = coeffs[: N + 1]
        W = N
    else:
        W = C + n * (r + 2)
        coeffs += [PadicScalar.zero_at(cfg, 0)] * (W - C)
    one = PadicScalar.one(cfg)
    g: Coeffs = [PadicScalar.zero(cfg)] * n + [one]
    max_iter = 4 * (r + 2) + W // max(n, 1) + 10
    for it in range(max_iter):
        h, R = _divmod_lists(cfg, coeffs, g)
        if all(c.is_zero for c in R):
            break
        H = inverse_lists(cfg, h, n - 1)
        prod = _mul_lists(cfg, R, H, 2 * n - 2)
        _, delta = _divmod_lists(cfg, prod, g)
        g = [g[i] + delta[i] for i in range(n)] + [one]
    else:
        raise InvariantViolationError(f"Préparation de Weierstrass non convergente (n = {n})")
    log.debug("préparation : %s itérations, cap de travail %s", it, W)

    if F.is_polynomial:
        g_series = TruncSeries.from_values(cfg, g, max(C, n), True)
        v = TruncSeries.from_values(cfg, h, C, True)
        return g_series, v
    g = [_abs_cap(c, (W + 1 - i) // n) for i, c in enumerate(g[:n])] + [one]
    v = [_abs_cap(h[d], (W + 1 - d) // n) for d in range(C + 1)]
    return TruncSeries.from_values(cfg, g, max(C, n), True), TruncSeries(cfg, tuple(v), False)


def weierstrass_prep(f: TruncSeries) -> WeierstrassSplit:
    """f = X · g · v avec g distingué de degré wideg(f) - 1."""
    if not f.coeffs[0].is_exact_zero:
        raise HypothesisError("weierstrass_prep : f(0) ≠ 0")
    q = weierstrass_degree(f).require()
    F = f.shift_down(1)
    n = q - 1
    if n == 0:
        return WeierstrassSplit(TruncSeries.constant(f.config, 1, F.cap), F, 0, 1)
    g, v = _split(F, n)
    return WeierstrassSplit(g, v, 0, 1)


def distinguished_part(h: TruncSeries) -> WeierstrassSplit:
    """h = p^t · g · v, contenu p^t calculé sur les coefficients connus (jusqu'au cap)."""
    t, where = h.min_valuation()
    if where is None:
        raise HypothesisError("distinguished_part : série nulle à la précision")
    for k, c in enumerate(h.coeffs):
        if c.unit is None and not c.is_exact_zero and c.valuation <= t:
            raise PrecisionExhaustedError(f"Contenu de la série indéterminé (X^{k} = {c.render()})")
    cfg = h.config
    H = h.scalar_mul(PadicScalar.from_int(cfg, cfg.p) ** (-t)) if t else h
    n = weierstrass_degree(H).require()
    if n == 0:
        return WeierstrassSplit(TruncSeries.constant(cfg, 1, H.cap), H, t, 0)
    g, v = _split(H, n)
    return WeierstrassSplit(g, v, t, 0)


# ---------------------------------------------------------------------------
# Polygone de Newton
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    vertices: Tuple[Tuple[int, Fraction], ...]
    slopes: Tuple[Tuple[Fraction, int], ...]  # (pente, longueur)

    def height_at(self, i: int) -> Fraction:
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= i <= x1:
                return y0 + (y1 - y0) * Fraction(i - x0, x1 - x0)
        raise ValueError(f"Abscisse {i} hors du polygone")


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(f: TruncSeries) -> NewtonPolygon:
    """Enveloppe convexe inférieure des (i, val c_i), jusqu'au degré (polynôme) ou au wideg."""
    if f.is_polynomial:
        end = f.degree
    else:
        wd = weierstrass_degree(f)
        end = wd.value if wd.finite else f.cap
    points = [(k, Fraction(c.valuation)) for k, c in enumerate(f.coeffs[: end + 1]) if c.is_nonzero]
    if not points:
        raise HypothesisError("newton_polygon : série nulle à la précision")
    hull: List[Tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    slopes = tuple((Fraction(y1 - y0) / (x1 - x0), x1 - x0) for (x0, y0), (x1, y1) in zip(hull, hull[1:]))
    poly = NewtonPolygon(tuple(hull), slopes)
    # un zéro à précision O(p^N) sous l'enveloppe la modifierait peut-être
    for k, c in enumerate(f.coeffs[: end + 1]):
        if c.unit is None and not c.is_exact_zero and hull[0][0] < k < hull[-1][0]:
            if c.valuation < poly.height_at(k):
                raise PrecisionExhaustedError(f"Polygone de Newton indéterminé en X^{k} ({c.render()})")
    return poly


def root_valuations(f: TruncSeries) -> List[Tuple[Fraction, int]]:
    """Valuations (et multiplicités) des racines non nulles du disque unité ouvert."""
    if not f.is_polynomial:
        weierstrass_degree(f).require()
    poly = newton_polygon(f)
    return [(-slope, length) for slope, length in poly.slopes if slope < 0]


# ---------------------------------------------------------------------------
# Résultant, racines simples
# ---------------------------------------------------------------------------

def resultant(a: TruncSeries, b: TruncSeries) -> PadicScalar:
    """Déterminant de Sylvester, élimination de Gauss à pivot de valuation minimale."""
    if not (a.is_polynomial and b.is_polynomial):
        raise HypothesisError("resultant : polynômes attendus")
    cfg = a.config
    da, db = a.degree, b.degree
    if da < 0 or db < 0:
        return PadicScalar.zero(cfg)
    size = da + db
    if size == 0:
        return PadicScalar.one(cfg)
    zero = PadicScalar.zero(cfg)
    rows: List[Coeffs] = []
    acoef = list(reversed(a.coeffs[: da + 1]))
    bcoef = list(reversed(b.coeffs[: db + 1]))
    for i in range(db):
        rows.append([zero] * i + acoef + [zero] * (size - da - 1 - i))
    for i in range(da):
        rows.append([zero] * i + bcoef + [zero] * (size - db - 1 - i))

    det = PadicScalar.one(cfg)
    sign = 1
    for col in range(size):
        candidates = [r for r in range(col, size) if rows[r][col].is_nonzero]
        if not candidates:
            # mineur restant : borne de Leibniz colonne par colonne
            bound = det.valuation
            for c in range(col, size):
                bound += min(rows[r][c].valuation for r in range(col, size))
            if bound == INF:
                return PadicScalar.zero(cfg)
            return PadicScalar.zero_at(cfg, bound)
        piv = min(candidates, key=lambda r: rows[r][col].valuation)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = det * pivot
        inv = pivot.invert()
        for r in range(col + 1, size):
            if rows[r][col].is_exact_zero:
                continue
            factor = rows[r][col] * inv
            rows[r] = [rows[r][c] - factor * rows[col][c] if c > col else zero for c in range(size)]
    return det if sign > 0 else -det


@dataclass(frozen=True)
class SimpleRootsCertificate:
    simple: bool
    method: str
    precision: Union[int, float, None] = None  # discriminant nul modulo p^precision
    detail: str = ""


def simple_roots_certificate(f: TruncSeries) -> SimpleRootsCertificate:
    """Les racines de f dans le disque unité ouvert sont-elles simples ?"""
    order = f.order
    if order == INF:
        raise HypothesisError("simple_roots_certificate : série nulle")
    if order >= 2:
        return SimpleRootsCertificate(False, "order", INF, f"racine 0 de multiplicité {order}")
    dp = distinguished_part(f.derivative())
    if dp.degree == 0:
        return SimpleRootsCertificate(True, "derivative-unit", None, "f' sans racine dans le disque ouvert")
    df = distinguished_part(f)
    res = resultant(df.distinguished, dp.distinguished)
    n = certify_equal(res, PadicScalar.zero(f.config))
    if n is None:
        return SimpleRootsCertificate(True, "resultant", None, f"Res = {res.render()}")
    return SimpleRootsCertificate(False, "resultant", n, f"Res = {res.render()}")
