from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from app.errors import (
    ConfigMismatchError,
    HypothesisError,
    InvariantViolationError,
    NotAnMthPowerError,
    PadicZeroDivisionError,
    PrecisionExhaustedError,
    UnsupportedRamifiedRootError,
)
from app.residue_field import Residue, ResidueField, is_irreducible_mod_p, smallest_irreducible
from app.settings import DEFAULT_PRECISION

log = logging.getLogger(__name__)

INF = math.inf


@lru_cache(maxsize=4096)
def ppow(p: int, k: int) -> int:
    return p ** k


def valp_int(n: int, p: int, bound: Optional[int] = None) -> Union[int, float]:
    """Valuation p-adique d'un entier ; `bound` plafonne la recherche (et vaut pour n = 0)."""
    if n == 0:
        return INF if bound is None else bound
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if bound is not None and v >= bound:
            return bound
    return v


def valp_rational(q: Fraction, p: int) -> Union[int, float]:
    q = Fraction(q)
    if q == 0:
        return INF
    return valp_int(q.numerator, p) - valp_int(q.denominator, p)


# ---------------------------------------------------------------------------
# Anneau de base
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingConfig:
    """
    Anneau O_K non ramifié : Z_p[x]/(modulus), corps résiduel F_{p^s}.

    Les unités sont portées modulo p^rel_precision. Deux configurations
    ne se mélangent que si elles sont égales.
    """
    p: int
    residue_degree: int = 1
    modulus: Tuple[int, ...] = ()
    rel_precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise ValueError(f"p = {self.p!r} n'est pas un nombre premier")
        if self.residue_degree < 1:
            raise ValueError(f"Degré résiduel invalide : {self.residue_degree}")
        if self.rel_precision < 1:
            raise ValueError(f"Précision relative invalide : {self.rel_precision}")
        modulus = tuple(int(c) for c in self.modulus) or smallest_irreducible(self.p, self.residue_degree)
        if len(modulus) != self.residue_degree + 1 or modulus[-1] != 1:
            raise ValueError(f"Module {modulus} : unitaire de degré {self.residue_degree} attendu")
        if not is_irreducible_mod_p(modulus, self.p):
            raise ValueError(f"Module {modulus} non irréductible modulo {self.p}")
        object.__setattr__(self, "modulus", modulus)

    @cached_property
    def field(self) -> ResidueField:
        return ResidueField(self.p, tuple(c % self.p for c in self.modulus))

    def same_ring(self, other: "RingConfig") -> bool:
        return (self.p, self.residue_degree, self.modulus) == (other.p, other.residue_degree, other.modulus)

    def with_precision(self, rel_precision: int) -> "RingConfig":
        return replace(self, rel_precision=rel_precision)

    def describe(self) -> str:
        if self.residue_degree == 1:
            return f"Z_{self.p} (r={self.rel_precision})"
        terms = []
        for i, c in reversed(list(enumerate(self.modulus))):
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else f"{c}*{mono}" if i else str(c))
        return f"Z_{self.p}[x]/({' + '.join(terms)}) (r={self.rel_precision})"


# ---------------------------------------------------------------------------
# Polynômes d'unités (coefficients entiers, degré < s)
# ---------------------------------------------------------------------------

def _reduce_poly(coeffs: Sequence[int], mu: Sequence[int], s: int) -> Tuple[int, ...]:
    r = list(coeffs)
    for k in range(len(r) - 1, s - 1, -1):
        c = r[k]
        if c:
            r[k] = 0
            for i in range(s):
                r[k - s + i] -= c * mu[i]
    r = r[:s]
    return tuple(r + [0] * (s - len(r)))


def _polymul(a: Sequence[int], b: Sequence[int], mu: Sequence[int], s: int) -> Tuple[int, ...]:
    if s == 1:
        return (a[0] * b[0],)
    r = [0] * (2 * s - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _reduce_poly(r, mu, s)


def _rational_lift(u: int, modulus: int) -> Optional[Fraction]:
    """Reconstruction rationnelle a/b ≡ u avec |a|, |b| <= sqrt(modulus/2), sinon None."""
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, u % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, t1) != 1:
        return None
    return Fraction(r1, t1)


def _balanced(c: int, modulus: int) -> int:
    c %= modulus
    return c - modulus if c > modulus // 2 else c


# ---------------------------------------------------------------------------
# Scalaires
# ---------------------------------------------------------------------------

@dataclass(frozen=True, repr=False)
class PadicScalar:
    """
    Élément p^valuation · unit de K à précision finie (modèle flottant).

    - zéro exact : valuation = inf, unit = None ;
    - zéro à précision O(p^N) : valuation = N (borne inférieure), unit = None ;
    - sinon unit est inversible mod p et connu mod p^known_precision.
    """
    config: RingConfig
    valuation: Union[int, float]
    unit: Optional[Tuple[int, ...]] = None
    known_precision: int = 0
    exact_value: Optional[Fraction] = field(default=None, compare=False)

    # ---------- constructeurs ----------

    @classmethod
    def zero(cls, config: RingConfig) -> "PadicScalar":
        return cls(config, INF, None, 0, Fraction(0))

    @classmethod
    def zero_at(cls, config: RingConfig, n: int) -> "PadicScalar":
        return cls(config, int(n), None, 0)

    @classmethod
    def from_int(cls, config: RingConfig, n: int) -> "PadicScalar":
        n = int(n)
        if n == 0:
            return cls.zero(config)
        p, r = config.p, config.rel_precision
        v = valp_int(n, p)
        unit = (n // ppow(p, v)) % ppow(p, r)
        return cls(config, v, (unit,) + (0,) * (config.residue_degree - 1), r, Fraction(n))

    @classmethod
    def from_rational(cls, config: RingConfig, q: Union[int, Fraction]) -> "PadicScalar":
        q = Fraction(q)
        if q.denominator == 1:
            return cls.from_int(config, q.numerator)
        if q == 0:
            return cls.zero(config)
        p, r = config.p, config.rel_precision
        vn, vd = valp_int(q.numerator, p), valp_int(q.denominator, p)
        M = ppow(p, r)
        num = q.numerator // ppow(p, vn)
        den = q.denominator // ppow(p, vd)
        unit = num * pow(den, -1, M) % M
        return cls(config, vn - vd, (unit,) + (0,) * (config.residue_degree - 1), r, q)

    @classmethod
    def one(cls, config: RingConfig) -> "PadicScalar":
        return cls.from_int(config, 1)

    @classmethod
    def from_poly(cls, config: RingConfig, coeffs: Sequence[int], valuation: int = 0,
                  precision: Optional[int] = None) -> "PadicScalar":
        """p^valuation · Σ c_i ξ^i (ξ racine du module), connu sur `precision` chiffres."""
        coeffs = [int(c) for c in coeffs] or [0]
        if precision is None and not any(coeffs[1:]):
            return cls.from_rational(config, Fraction(coeffs[0]) * Fraction(config.p) ** valuation)
        K = config.rel_precision if precision is None else precision
        poly = _reduce_poly(coeffs, config.modulus, config.residue_degree)
        return _normalize(config, valuation, poly, K)

    @classmethod
    def generator(cls, config: RingConfig) -> "PadicScalar":
        if config.residue_degree == 1:
            return cls.from_int(config, -config.modulus[0])
        return cls.from_poly(config, (0, 1))

    @classmethod
    def coerce(cls, config: RingConfig, x: "Number") -> "PadicScalar":
        if isinstance(x, PadicScalar):
            if x.config is not config and x.config != config:
                raise ConfigMismatchError(f"{config.describe()} vs {x.config.describe()}")
            return x
        if isinstance(x, bool):
            raise TypeError("booléen refusé comme scalaire p-adique")
        if isinstance(x, int):
            return cls.from_int(config, x)
        if isinstance(x, Fraction):
            return cls.from_rational(config, x)
        raise TypeError(f"Impossible de convertir {x!r} en scalaire p-adique")

    # ---------- état ----------

    @property
    def is_exact_zero(self) -> bool:
        return self.unit is None and self.valuation == INF

    @property
    def is_zero(self) -> bool:
        """Nul à la précision connue (exactement ou O(p^N))."""
        return self.unit is None

    @property
    def is_nonzero(self) -> bool:
        """Non-nullité certifiée."""
        return self.unit is not None

    @property
    def is_unit(self) -> bool:
        return self.unit is not None and self.valuation == 0

    @property
    def absolute_precision(self) -> Union[int, float]:
        if self.unit is None:
            return self.valuation
        return self.valuation + self.known_precision

    def residue(self) -> Residue:
        """Image dans le corps résiduel (élément entier requis)."""
        fld = self.config.field
        if self.unit is None:
            if self.valuation >= 1:
                return fld.zero()
            raise PrecisionExhaustedError(f"Résidu de {self.render()} indéterminé")
        if self.valuation > 0:
            return fld.zero()
        if self.valuation < 0:
            raise HypothesisError(f"{self.render()} n'est pas entier")
        return fld.normalize(tuple(c % self.config.p for c in self.unit))

    def lift_int(self) -> int:
        """Représentant entier p^v·u (anneau Z_p, élément entier)."""
        if self.config.residue_degree != 1:
            raise HypothesisError("lift_int réservé au degré résiduel 1")
        if self.unit is None:
            return 0
        if self.valuation < 0:
            raise HypothesisError(f"{self.render()} n'est pas entier")
        return ppow(self.config.p, self.valuation) * self.unit[0]

    # ---------- précision ----------

    def truncate_precision(self, k: int) -> "PadicScalar":
        """Ne garde que k chiffres significatifs (k <= known_precision)."""
        if self.unit is None or k >= self.known_precision:
            return self
        if k <= 0:
            return PadicScalar.zero_at(self.config, self.valuation + k)
        M = ppow(self.config.p, k)
        return PadicScalar(self.config, self.valuation, tuple(c % M for c in self.unit), k)

    def recast(self, config: RingConfig) -> "PadicScalar":
        """Change rel_precision (même anneau) ; les valeurs exactes regagnent des chiffres."""
        if not config.same_ring(self.config):
            raise ConfigMismatchError(f"recast {self.config.describe()} -> {config.describe()}")
        if self.exact_value is not None:
            return PadicScalar.from_rational(config, self.exact_value)
        if self.unit is None:
            return PadicScalar(config, self.valuation, None, 0)
        k = min(self.known_precision, config.rel_precision)
        M = ppow(config.p, k)
        return PadicScalar(config, self.valuation, tuple(c % M for c in self.unit), k)

    # ---------- arithmétique ----------

    def _coerce(self, other) -> "PadicScalar":
        return PadicScalar.coerce(self.config, other)

    def __add__(self, other) -> "PadicScalar":
        return fsum(self.config, (self, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self) -> "PadicScalar":
        if self.unit is None:
            return self
        M = ppow(self.config.p, self.known_precision)
        exact = -self.exact_value if self.exact_value is not None else None
        return PadicScalar(self.config, self.valuation, tuple((-c) % M for c in self.unit),
                           self.known_precision, exact)

    def __sub__(self, other) -> "PadicScalar":
        return fsum(self.config, (self, -self._coerce(other)))

    def __rsub__(self, other) -> "PadicScalar":
        return fsum(self.config, (self._coerce(other), -self))

    def __mul__(self, other) -> "PadicScalar":
        other = self._coerce(other)
        cfg = self.config
        if self.unit is None or other.unit is None:
            if self.is_exact_zero or other.is_exact_zero:
                return PadicScalar.zero(cfg)
            return PadicScalar.zero_at(cfg, self.valuation + other.valuation)
        kp = min(self.known_precision, other.known_precision)
        M = ppow(cfg.p, kp)
        unit = tuple(c % M for c in _polymul(self.unit, other.unit, cfg.modulus, cfg.residue_degree))
        return PadicScalar(cfg, self.valuation + other.valuation, unit, kp)

    __rmul__ = __mul__

    def invert(self) -> "PadicScalar":
        if self.is_exact_zero:
            raise PadicZeroDivisionError("Inversion de 0")
        if self.unit is None:
            raise PrecisionExhaustedError(f"Inversion de {self.render()} : nul à la précision")
        cfg = self.config
        kp = self.known_precision
        if cfg.residue_degree == 1:
            unit = (pow(self.unit[0], -1, ppow(cfg.p, kp)),)
        else:
            unit = _unit_inverse(cfg, self.unit, kp)
        exact = 1 / self.exact_value if self.exact_value is not None else None
        return PadicScalar(cfg, -self.valuation, unit, kp, exact)

    def __truediv__(self, other) -> "PadicScalar":
        return self * self._coerce(other).invert()

    def __rtruediv__(self, other) -> "PadicScalar":
        return self._coerce(other) * self.invert()

    def __pow__(self, n: int) -> "PadicScalar":
        if not isinstance(n, int):
            raise TypeError("Exposant entier attendu (voir padic_power pour Z_p)")
        cfg = self.config
        if n == 0:
            return PadicScalar.one(cfg)
        if n < 0:
            return self.invert() ** (-n)
        if self.unit is None:
            return self if self.is_exact_zero else PadicScalar.zero_at(cfg, self.valuation * n)
        kp = self.known_precision
        M = ppow(cfg.p, kp)
        if cfg.residue_degree == 1:
            unit = (pow(self.unit[0], n, M),)
        else:
            unit = _unit_pow(cfg, self.unit, n, M)
        exact = None
        if self.exact_value is not None and _exact_power_fits(self.exact_value, n, cfg.p, kp):
            exact = self.exact_value ** n
        return PadicScalar(cfg, self.valuation * n, unit, kp, exact)

    # ---------- comparaison / rendu ----------

    def agrees(self, other) -> bool:
        """Vrai si la différence est nulle à la précision commune."""
        return (self - self._coerce(other)).is_zero

    def render(self) -> str:
        p = self.config.p
        if self.is_exact_zero:
            return "0"
        if self.unit is None:
            return f"O({p}^{self.valuation})"
        return f"{self._render_value()} + O({p}^{self.absolute_precision})"

    def _render_value(self) -> str:
        p, v = self.config.p, self.valuation
        M = ppow(p, self.known_precision)
        if not any(c % M for c in self.unit[1:]):
            q = _rational_lift(self.unit[0], M)
            if q is not None and q.denominator % p:
                return str(q * Fraction(p) ** v)
            body = str(_balanced(self.unit[0], M))
        else:
            body = "[" + ", ".join(str(_balanced(c, M)) for c in self.unit) + "]"
        return body if v == 0 else f"{p}^{v}*{body}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"PadicScalar({self.render()})"


Number = Union[int, Fraction, PadicScalar]


def _exact_power_fits(q: Fraction, n: int, p: int, kp: int) -> bool:
    """q^n reste mémorisé tant que sa taille ne dépasse pas (largement) celle de p^kp."""
    if abs(q) == 1:
        return True
    bits = n * max(q.numerator.bit_length(), q.denominator.bit_length())
    return bits <= 2 * kp * p.bit_length() + 64


def _normalize(config: RingConfig, v: int, poly: Sequence[int], K: Union[int, float]) -> PadicScalar:
    """p^v · poly connu modulo p^{v+K} -> forme normale (valuation extraite)."""
    if K <= 0:
        return PadicScalar.zero_at(config, v + K)
    p = config.p
    M = ppow(p, K)
    poly = [c % M for c in poly]
    t = min(valp_int(c, p, K) for c in poly)
    if t >= K:
        return PadicScalar.zero_at(config, v + K)
    kp = min(K - t, config.rel_precision)
    if t:
        d = ppow(p, t)
        poly = [c // d for c in poly]
    M2 = ppow(p, kp)
    return PadicScalar(config, v + t, tuple(c % M2 for c in poly), kp)


def _unit_inverse(config: RingConfig, unit: Sequence[int], kp: int) -> Tuple[int, ...]:
    p, mu, s = config.p, config.modulus, config.residue_degree
    y = list(config.field.inv(tuple(c % p for c in unit)))
    k = 1
    # Newton : y <- y (2 - u y), la précision double à chaque pas
    while k < kp:
        k = min(2 * k, kp)
        M = ppow(p, k)
        uy = _polymul(unit, y, mu, s)
        corr = [(-c) % M for c in uy]
        corr[0] = (corr[0] + 2) % M
        y = [c % M for c in _polymul(y, corr, mu, s)]
    M = ppow(p, kp)
    return tuple(c % M for c in y)


def _unit_pow(config: RingConfig, unit: Sequence[int], n: int, M: int) -> Tuple[int, ...]:
    mu, s = config.modulus, config.residue_degree
    result = (1,) + (0,) * (s - 1)
    base = tuple(unit)
    while n:
        if n & 1:
            result = tuple(c % M for c in _polymul(result, base, mu, s))
        n >>= 1
        if n:
            base = tuple(c % M for c in _polymul(base, base, mu, s))
    return result


# ---------------------------------------------------------------------------
# Noyaux de sommation (toutes les sommes de séries passent par ici)
# ---------------------------------------------------------------------------

def _check_config(config: RingConfig, x: PadicScalar) -> None:
    if x.config is not config and x.config != config:
        raise ConfigMismatchError(f"{config.describe()} vs {x.config.describe()}")


def _accumulate(config: RingConfig, terms: List[Tuple[int, Tuple[int, ...]]],
                amin: Union[int, float]) -> PadicScalar:
    live = [(v, u) for v, u in terms if v < amin]
    if not live:
        if amin == INF:
            return PadicScalar.zero(config)
        return PadicScalar.zero_at(config, amin)
    vmin = min(v for v, _ in live)
    K = amin - vmin
    if K == INF:
        raise InvariantViolationError("Somme sans borne de précision")
    p = config.p
    if config.residue_degree == 1:
        tot = 0
        for v, u in live:
            tot += u[0] * ppow(p, v - vmin) if v != vmin else u[0]
        return _normalize(config, vmin, (tot,), K)
    acc = [0] * config.residue_degree
    for v, u in live:
        f = ppow(p, v - vmin)
        for i, c in enumerate(u):
            acc[i] += c * f
    return _normalize(config, vmin, acc, K)


def fsum(config: RingConfig, terms: Iterable[PadicScalar]) -> PadicScalar:
    """Somme exacte d'approximations ; précision = min des précisions absolues."""
    amin: Union[int, float] = INF
    vals = []
    for t in terms:
        _check_config(config, t)
        if t.unit is None:
            if t.valuation < amin:
                amin = t.valuation
            continue
        a = t.valuation + t.known_precision
        if a < amin:
            amin = a
        vals.append((t.valuation, t.unit))
    return _accumulate(config, vals, amin)


def fdot(config: RingConfig, pairs: Iterable[Tuple[PadicScalar, PadicScalar]]) -> PadicScalar:
    """Σ a_i b_i en une seule réduction (noyau des produits de séries)."""
    amin: Union[int, float] = INF
    vals = []
    mu, s = config.modulus, config.residue_degree
    for a, b in pairs:
        if a.unit is None or b.unit is None:
            if a.is_exact_zero or b.is_exact_zero:
                continue
            _check_config(config, a)
            _check_config(config, b)
            bound = a.valuation + b.valuation
            if bound < amin:
                amin = bound
            continue
        _check_config(config, a)
        _check_config(config, b)
        v = a.valuation + b.valuation
        A = v + min(a.known_precision, b.known_precision)
        if A < amin:
            amin = A
        vals.append((v, _polymul(a.unit, b.unit, mu, s)))
    return _accumulate(config, vals, amin)


# ---------------------------------------------------------------------------
# Teichmüller, racines de Hensel, puissances p-adiques
# ---------------------------------------------------------------------------

def teichmuller(c: Union[int, Sequence[int]], config: RingConfig) -> PadicScalar:
    """Relevé [c] : racine de l'unité d'ordre divisant p^s - 1 de résidu c."""
    fld = config.field
    c = fld.normalize(c)
    if fld.is_zero(c):
        raise HypothesisError("Relevé de Teichmüller de 0 : utiliser PadicScalar.zero")
    x = PadicScalar.from_poly(config, c)
    if x.exact_value not in (1, -1):
        # x -> x^q ferait exploser la valeur exacte
        x = replace(x, exact_value=None)
    q = fld.order
    for _ in range(config.rel_precision + 2):
        y = x ** q
        if y == x:
            return x if x.exact_value in (1, -1) else replace(x, exact_value=None)
        x = y
    raise InvariantViolationError(f"Itération de Teichmüller non stationnaire pour {c}")


def mth_root_unit(a: PadicScalar, m: int, target_residue: Union[int, Sequence[int]]) -> PadicScalar:
    """Unique x unité avec x^m = a et résidu(x) = target_residue (Newton)."""
    cfg = a.config
    if m < 1:
        raise ValueError(f"m = {m} invalide")
    if math.gcd(m, cfg.p) != 1:
        raise UnsupportedRamifiedRootError(f"Racine {m}-ième avec p = {cfg.p} : extension ramifiée")
    if not a.is_unit:
        raise HypothesisError(f"{a.render()} n'est pas une unité")
    fld = cfg.field
    t = fld.normalize(target_residue)
    if fld.is_zero(t) or fld.pow(t, m) != a.residue():
        raise NotAnMthPowerError(f"{t}^{m} ≠ résidu de {a.render()}")
    if m == 1:
        return a
    kp = a.known_precision
    x = PadicScalar.from_poly(cfg, t).truncate_precision(kp)
    if a.exact_value is None or x.exact_value is None or x.exact_value ** m != a.exact_value:
        x = replace(x, exact_value=None)
    for _ in range(kp.bit_length() + 3):
        xm1 = x ** (m - 1)
        fx = xm1 * x - a
        if fx.is_zero:
            return x
        x = x - fx / (xm1 * m)
    raise InvariantViolationError(f"Newton ne converge pas pour la racine {m}-ième de {a.render()}")


def padic_power(x: PadicScalar, a: Union[int, Fraction, PadicScalar]) -> PadicScalar:
    """
    x^a pour x unité principale (x ≡ 1 mod 𝔪) et a ∈ Z_p.

    a est remplacé par un entier A ≡ a mod p^N (N précision absolue de a) ;
    x^{a-A} ≡ 1 mod p^{N+1}, d'où la précision min(kp(x), N + 1).
    """
    cfg = x.config
    if not x.is_unit or x.residue() != cfg.field.one():
        raise HypothesisError(f"{x.render()} n'est pas une unité principale")
    if isinstance(a, int):
        return x ** a
    if isinstance(a, Fraction):
        if a.denominator == 1:
            return x ** a.numerator
        a = PadicScalar.from_rational(RingConfig(cfg.p, rel_precision=cfg.rel_precision), a)
    if a.config.p != cfg.p or a.config.residue_degree != 1:
        raise HypothesisError(f"Exposant {a.render()} hors de Z_{cfg.p}")
    if a.is_exact_zero:
        return PadicScalar.one(cfg)
    N = a.absolute_precision
    if N < 0 or (a.unit is not None and a.valuation < 0):
        raise HypothesisError(f"Exposant {a.render()} hors de Z_{cfg.p}")
    if a.unit is None:
        return PadicScalar.one(cfg).truncate_precision(min(cfg.rel_precision, N + 1))
    y = x ** a.lift_int()
    log.debug("padic_power: exposant %s, précision %s", a.render(), N + 1)
    return y.truncate_precision(min(y.known_precision, N + 1))


def certify_equal(a: PadicScalar, b: PadicScalar) -> Optional[Union[int, float]]:
    """
    Prédicat a = b à précision finie.

    Renvoie None si a - b est certifié non nul, sinon N tel que a ≡ b mod p^N
    (inf pour une égalité exacte). Si un côté non nul a une valuation >= N,
    aucun de ses chiffres n'a été comparé : PrecisionExhaustedError.
    """
    d = a - b
    if d.is_nonzero:
        return None
    N = d.valuation
    for x in (a, b):
        if x.is_nonzero and x.valuation >= N:
            raise PrecisionExhaustedError(
                f"Comparaison de {a.render()} et {b.render()} : précision insuffisante")
    return N
