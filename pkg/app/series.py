from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from app.errors import (
    CapTooSmallError,
    ConfigMismatchError,
    HypothesisError,
    NotAnMthPowerError,
    PrecisionExhaustedError,
    UnsupportedRamifiedRootError,
)
from app.padic import INF, Number, PadicScalar, RingConfig, certify_equal, fdot, mth_root_unit

log = logging.getLogger(__name__)

Coeffs = List[PadicScalar]


# ---------------------------------------------------------------------------
# Noyaux sur listes de coefficients
# ---------------------------------------------------------------------------

def _mul_lists(config: RingConfig, a: Sequence[PadicScalar], b: Sequence[PadicScalar], cap: int) -> Coeffs:
    """Produit tronqué à X^{cap} (coefficients au-delà des listes = 0 exact)."""
    ia = [(i, c) for i, c in enumerate(a) if not c.is_exact_zero and i <= cap]
    lb = len(b)
    out = []
    for k in range(cap + 1):
        pairs = []
        for i, c in ia:
            if i > k:
                break
            j = k - i
            if j < lb:
                pairs.append((c, b[j]))
        out.append(fdot(config, pairs))
    return out


def inverse_lists(config: RingConfig, a: Sequence[PadicScalar], cap: int) -> Coeffs:
    """b = 1/a modulo X^{cap+1} : b_k = -(1/a_0) Σ_{j>=1} a_j b_{k-j}."""
    if a[0].is_exact_zero:
        raise HypothesisError("Inverse d'une série de terme constant nul")
    inv0 = a[0].invert()
    out = [inv0]
    for k in range(1, cap + 1):
        s = fdot(config, ((a[j], out[k - j]) for j in range(1, min(k, len(a) - 1) + 1)))
        out.append(-(s * inv0))
    return out


def _last_nonzero(coeffs: Sequence[PadicScalar]) -> int:
    for k in range(len(coeffs) - 1, -1, -1):
        if not coeffs[k].is_exact_zero:
            return k
    return -1


@dataclass(frozen=True)
class SeriesComparison:
    """Résultat d'un test d'égalité coefficient par coefficient (jusqu'au cap)."""
    equal: bool
    first_failure: Optional[int]
    precision: Union[int, float]  # égalité certifiée modulo p^precision
    cap: int


# ---------------------------------------------------------------------------
# Séries tronquées
# ---------------------------------------------------------------------------

@dataclass(frozen=True, repr=False)
class TruncSeries:
    """
    Série Σ c_k X^k connue modulo X^{cap+1}.

    is_polynomial : tous les coefficients au-delà du cap sont des zéros exacts.
    """
    config: RingConfig
    coeffs: Tuple[PadicScalar, ...]
    is_polynomial: bool = False

    # ---------- constructeurs ----------

    @classmethod
    def from_values(cls, config: RingConfig, values: Sequence[Number], cap: int,
                    is_polynomial: bool = False) -> "TruncSeries":
        """values[k] = coefficient de X^k ; au-delà : 0 (exact si polynôme)."""
        if cap < 0:
            raise CapTooSmallError(f"cap = {cap}")
        coeffs = [PadicScalar.coerce(config, v) for v in values]
        if len(coeffs) > cap + 1:
            if is_polynomial and _last_nonzero(coeffs) > cap:
                is_polynomial = False
            coeffs = coeffs[: cap + 1]
        coeffs += [PadicScalar.zero(config)] * (cap + 1 - len(coeffs))
        return cls(config, tuple(coeffs), is_polynomial)

    @classmethod
    def polynomial(cls, config: RingConfig, values: Sequence[Number], cap: Optional[int] = None) -> "TruncSeries":
        if cap is None:
            cap = max(len(values) - 1, 1)
        return cls.from_values(config, values, cap, True)

    @classmethod
    def zero(cls, config: RingConfig, cap: int) -> "TruncSeries":
        return cls.from_values(config, [], cap, True)

    @classmethod
    def constant(cls, config: RingConfig, c: Number, cap: int) -> "TruncSeries":
        return cls.from_values(config, [c], cap, True)

    @classmethod
    def X(cls, config: RingConfig, cap: int) -> "TruncSeries":
        return cls.from_values(config, [0, 1], cap, True)

    # ---------- accès ----------

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> PadicScalar:
        if 0 <= k <= self.cap:
            return self.coeffs[k]
        if k > self.cap and self.is_polynomial:
            return PadicScalar.zero(self.config)
        raise IndexError(f"Coefficient X^{k} hors de précision (cap = {self.cap})")

    @property
    def degree(self) -> int:
        """Indice du dernier coefficient non exactement nul (-1 pour 0)."""
        return _last_nonzero(self.coeffs)

    @property
    def order(self) -> Union[int, float]:
        """Ordre X-adique : premier coefficient non exactement nul."""
        for k, c in enumerate(self.coeffs):
            if not c.is_exact_zero:
                return k
        return INF

    @property
    def is_exact_zero(self) -> bool:
        return all(c.is_exact_zero for c in self.coeffs)

    def min_valuation(self, start: int = 0) -> Tuple[Union[int, float], Optional[int]]:
        """(min des valuations des coefficients certifiés non nuls, indice)."""
        best: Union[int, float] = INF
        where = None
        for k in range(start, self.cap + 1):
            c = self.coeffs[k]
            if c.is_nonzero and c.valuation < best:
                best, where = c.valuation, k
        return best, where

    # ---------- cap ----------

    def truncate(self, cap: int) -> "TruncSeries":
        if cap >= self.cap:
            return self
        keep_poly = self.is_polynomial and self.degree <= cap
        return TruncSeries(self.config, self.coeffs[: cap + 1], keep_poly)

    def extend(self, cap: int) -> "TruncSeries":
        if cap <= self.cap:
            return self
        if not self.is_polynomial:
            raise CapTooSmallError(f"Série connue jusqu'à X^{self.cap}, X^{cap} demandé")
        pad = (PadicScalar.zero(self.config),) * (cap - self.cap)
        return TruncSeries(self.config, self.coeffs + pad, True)

    def resize(self, cap: int) -> "TruncSeries":
        return self.truncate(cap) if cap < self.cap else self.extend(cap)

    def _aligned(self, other: "TruncSeries") -> Tuple["TruncSeries", "TruncSeries", int]:
        if other.config != self.config:
            raise ConfigMismatchError(f"{self.config.describe()} vs {other.config.describe()}")
        if self.is_polynomial and other.is_polynomial:
            cap = max(self.cap, other.cap)
        elif self.is_polynomial:
            cap = other.cap
        elif other.is_polynomial:
            cap = self.cap
        else:
            cap = min(self.cap, other.cap)
        return self.resize(cap), other.resize(cap), cap

    def _new(self, coeffs: Sequence[PadicScalar], is_polynomial: bool) -> "TruncSeries":
        return TruncSeries(self.config, tuple(coeffs), is_polynomial)

    def map_coefficients(self, fn: Callable[[PadicScalar], PadicScalar],
                         config: Optional[RingConfig] = None) -> "TruncSeries":
        return TruncSeries(config or self.config, tuple(fn(c) for c in self.coeffs), self.is_polynomial)

    def recast(self, config: RingConfig) -> "TruncSeries":
        return self.map_coefficients(lambda c: c.recast(config), config)

    # ---------- anneau ----------

    def __add__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            c0 = self.coeffs[0] + other
            return self._new((c0,) + self.coeffs[1:], self.is_polynomial)
        a, b, _ = self._aligned(other)
        return self._new([x + y for x, y in zip(a.coeffs, b.coeffs)], a.is_polynomial and b.is_polynomial)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return self._new([-c for c in self.coeffs], self.is_polynomial)

    def __sub__(self, other) -> "TruncSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncSeries":
        return (-self) + other

    def scalar_mul(self, s: Number) -> "TruncSeries":
        s = PadicScalar.coerce(self.config, s)
        return self._new([c * s for c in self.coeffs], self.is_polynomial)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scalar_mul(other)
        a, b, cap = self._aligned(other)
        poly = a.is_polynomial and b.is_polynomial
        if poly:
            # un produit de polynômes reste exact : le cap s'agrandit si besoin
            cap = max(cap, a.degree + b.degree)
        return self._new(_mul_lists(self.config, a.coeffs, b.coeffs, cap), poly)

    __rmul__ = __mul__

    def power(self, n: int) -> "TruncSeries":
        if n < 0:
            raise ValueError("Puissance négative d'une série")
        result = TruncSeries.constant(self.config, 1, self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result if self.is_polynomial else result.truncate(self.cap)

    def __pow__(self, n: int) -> "TruncSeries":
        return self.power(n)

    def derivative(self) -> "TruncSeries":
        d = [self.coeffs[k] * k for k in range(1, self.cap + 1)]
        if self.is_polynomial:
            return self._new(d + [PadicScalar.zero(self.config)], True)
        if not d:
            raise CapTooSmallError("Dérivée d'une série connue seulement en degré 0")
        return self._new(d, False)

    def shift_down(self, k: int = 1) -> "TruncSeries":
        """Division par X^k (les k premiers coefficients doivent être exactement nuls)."""
        if any(not c.is_exact_zero for c in self.coeffs[:k]):
            raise HypothesisError(f"Division par X^{k} : série d'ordre < {k}")
        rest = list(self.coeffs[k:])
        if self.is_polynomial:
            rest += [PadicScalar.zero(self.config)] * k
        elif not rest:
            raise CapTooSmallError(f"Division par X^{k} au-delà du cap {self.cap}")
        return self._new(rest, self.is_polynomial)

    def shift_up(self, k: int = 1) -> "TruncSeries":
        return self._new([PadicScalar.zero(self.config)] * k + list(self.coeffs), self.is_polynomial)

    def substitute_power(self, m: int, cap: Optional[int] = None) -> "TruncSeries":
        """f(X^m) ; connu jusqu'à X^{m(cap+1)-1} (X^{m·cap} pour un polynôme)."""
        natural = m * self.cap if self.is_polynomial else m * (self.cap + 1) - 1
        target = natural if cap is None else cap
        if target > natural and not self.is_polynomial:
            raise CapTooSmallError(f"f(X^{m}) connu seulement jusqu'à X^{natural}")
        out = [PadicScalar.zero(self.config)] * (target + 1)
        for k, c in enumerate(self.coeffs):
            if k * m > target:
                break
            out[k * m] = c
        return self._new(out, self.is_polynomial and self.degree * m <= target)

    # ---------- composition ----------

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """outer ∘ inner modulo X^{cap+1} (Horner), inner(0) exactement nul."""
        if not inner.coeffs[0].is_exact_zero:
            raise HypothesisError(f"compose : terme constant intérieur {inner.coeffs[0].render()} ≠ 0")
        outer, inner, cap = self._aligned(inner)
        cfg = self.config
        d = outer.degree
        poly = outer.is_polynomial and inner.is_polynomial and max(d, 0) * max(inner.degree, 0) <= cap
        if d <= 0:
            return TruncSeries.from_values(cfg, outer.coeffs[:1], cap, True)
        acc: Coeffs = [outer.coeffs[d]]
        for k in range(d - 1, -1, -1):
            acc = _mul_lists(cfg, acc, inner.coeffs, cap)
            acc[0] = acc[0] + outer.coeffs[k]
        return TruncSeries(cfg, tuple(acc), poly)

    def __call__(self, inner: "TruncSeries") -> "TruncSeries":
        return self.compose(inner)

    def inverse(self) -> "TruncSeries":
        """Inverse multiplicatif (terme constant non nul)."""
        inv = inverse_lists(self.config, self.coeffs, self.cap)
        linear_poly = self.is_polynomial and self.degree == 0
        return TruncSeries(self.config, tuple(inv), linear_poly)

    def comp_inverse(self) -> "TruncSeries":
        """g avec f∘g = g∘f = X ; g_k f_1^k = -Σ_{j<k} g_j [f^j]_k."""
        if not self.coeffs[0].is_exact_zero:
            raise HypothesisError("comp_inverse : f(0) ≠ 0")
        f1 = self.coeffs[1]
        if f1.is_exact_zero:
            raise HypothesisError("comp_inverse : f'(0) = 0")
        if f1.is_zero:
            raise PrecisionExhaustedError(f"comp_inverse : f'(0) = {f1.render()} indéterminé")
        cfg, cap = self.config, self.cap
        inv1 = f1.invert()
        if self.is_polynomial and self.degree <= 1:
            return TruncSeries.from_values(cfg, [0, inv1], cap, True)
        powers: List[Coeffs] = [[], list(self.coeffs)]
        for _ in range(2, cap):
            powers.append(_mul_lists(cfg, powers[-1], self.coeffs, cap))
        g: Coeffs = [PadicScalar.zero(cfg), inv1]
        inv_pow = inv1
        for k in range(2, cap + 1):
            inv_pow = inv_pow * inv1
            s = fdot(cfg, ((g[j], powers[j][k]) for j in range(1, k)))
            g.append(-(s * inv_pow))
        return TruncSeries(cfg, tuple(g), False)

    def iterate(self, n: int) -> "TruncSeries":
        if n < 0:
            raise ValueError("Itération négative : utiliser comp_inverse")
        if not self.coeffs[0].is_exact_zero:
            raise HypothesisError("iterate : f(0) ≠ 0")
        acc = TruncSeries.X(self.config, self.cap)
        if not self.is_polynomial:
            acc = TruncSeries(self.config, acc.coeffs, False)
        for _ in range(n):
            acc = self.compose(acc)
        return acc

    # ---------- comparaisons ----------

    def compare(self, other: "TruncSeries") -> SeriesComparison:
        """Égalité modulo (p^N, X^{cap+1}) ; première discordance certifiée sinon."""
        a, b, cap = self._aligned(other)
        N: Union[int, float] = INF
        for k in range(cap + 1):
            try:
                n = certify_equal(a.coeffs[k], b.coeffs[k])
            except PrecisionExhaustedError as ex:
                raise PrecisionExhaustedError(f"Coefficient X^{k} : {ex}") from ex
            if n is None:
                return SeriesComparison(False, k, N, cap)
            N = min(N, n)
        return SeriesComparison(True, None, N, cap)

    def agrees(self, other: "TruncSeries") -> bool:
        a, b, _ = self._aligned(other)
        return all(x.agrees(y) for x, y in zip(a.coeffs, b.coeffs))

    def first_disagreement(self, other: "TruncSeries") -> Optional[int]:
        a, b, _ = self._aligned(other)
        for k, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
            if not x.agrees(y):
                return k
        return None

    # ---------- rendu ----------

    def to_strings(self) -> List[str]:
        return [c.render() for c in self.coeffs]

    def render(self, var: str = "X") -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_exact_zero:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            txt = c.render()
            if mono:
                txt = f"({txt})*{mono}" if " " in txt or "/" in txt else f"{txt}*{mono}"
            terms.append(txt)
        body = " + ".join(terms) or "0"
        return body if self.is_polynomial else f"{body} + O({var}^{self.cap + 1})"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TruncSeries({self.render()})"


# ---------------------------------------------------------------------------
# Racines m-ièmes
# ---------------------------------------------------------------------------

def series_mth_root_unit(v: TruncSeries, m: int, target_residue=1) -> TruncSeries:
    """
    Unique y avec y^m = v et résidu(y(0)) = target_residue.

    Degré par degré : y_k = (v_k - [y_{<k}^m]_k) / (m y_0^{m-1}), sans division par p.
    """
    cfg = v.config
    if math.gcd(m, cfg.p) != 1:
        raise UnsupportedRamifiedRootError(f"Racine {m}-ième de série avec p = {cfg.p}")
    y0 = mth_root_unit(v.coeffs[0], m, target_residue)
    if m == 1:
        return v
    pivot = (y0 ** (m - 1) * m).invert()
    y: Coeffs = [y0]
    for k in range(1, v.cap + 1):
        partial = y + [PadicScalar.zero(cfg)]
        acc = partial
        for _ in range(m - 1):
            acc = _mul_lists(cfg, acc, partial, k)
        y.append((v.coeffs[k] - acc[k]) * pivot)
    return TruncSeries(cfg, tuple(y), False)


def poly_mth_root(g: TruncSeries, m: int) -> TruncSeries:
    """g₀ unitaire avec g₀^m = g (g polynôme unitaire, m | deg g)."""
    if not g.is_polynomial:
        raise HypothesisError("poly_mth_root : polynôme attendu")
    n = g.degree
    if n < 0 or not g.coeffs[n].agrees(1):
        raise HypothesisError(f"poly_mth_root : {g.render()} n'est pas unitaire")
    if n % m:
        raise NotAnMthPowerError(f"degré {n} non divisible par {m}")
    cfg = g.config
    d = n // m
    if d == 0:
        return TruncSeries.constant(cfg, 1, g.cap)
    reversed_g = TruncSeries(cfg, tuple(reversed(g.coeffs[: n + 1])), False)
    root = series_mth_root_unit(reversed_g.truncate(d), m, 1)
    g0 = TruncSeries.from_values(cfg, list(reversed(root.coeffs[: d + 1])), g.cap, True)
    check = g0.power(m).compare(g)
    if not check.equal:
        raise NotAnMthPowerError(f"{g.render()} n'est pas une puissance {m}-ième (X^{check.first_failure})")
    log.debug("poly_mth_root: g₀ = %s", g0.render())
    return g0
