from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from app.errors import CapTooSmallError, ConfigMismatchError, HypothesisError, PrecisionExhaustedError
from app.padic import INF, Number, PadicScalar, RingConfig, certify_equal, fdot
from app.series import TruncSeries

Monomial = Tuple[int, ...]


def monomials(total_cap: int, nvars: int = 2) -> Iterator[Monomial]:
    """Monômes de degré total <= total_cap, par degré total croissant puis lexicographique inverse."""
    for d in range(total_cap + 1):
        if nvars == 2:
            for i in range(d, -1, -1):
                yield (i, d - i)
        else:
            for a in range(d, -1, -1):
                for b in range(d - a, -1, -1):
                    yield (a, b, d - a - b)


@dataclass(frozen=True)
class Comparison:
    """Égalité coefficient par coefficient ; first_failure = premier monôme discordant certifié."""
    equal: bool
    first_failure: Optional[Monomial]
    precision: Union[int, float]


def compare_dicts(config: RingConfig, left: Dict[Monomial, PadicScalar], right: Dict[Monomial, PadicScalar],
                  total_cap: int, nvars: int) -> Comparison:
    zero = PadicScalar.zero(config)
    N: Union[int, float] = INF
    for mono in monomials(total_cap, nvars):
        a, b = left.get(mono, zero), right.get(mono, zero)
        if a.is_exact_zero and b.is_exact_zero:
            continue
        try:
            n = certify_equal(a, b)
        except PrecisionExhaustedError as ex:
            raise PrecisionExhaustedError(f"Monôme {mono} : {ex}") from ex
        if n is None:
            return Comparison(False, mono, N)
        N = min(N, n)
    return Comparison(True, None, N)


# ---------------------------------------------------------------------------
# Séries à deux variables tronquées en degré total
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BivarTrunc:
    """Σ c_{i,j} X^i Y^j pour i + j <= total_cap (monômes absents = 0 exact)."""
    config: RingConfig
    total_cap: int
    coeffs: Dict[Monomial, PadicScalar] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, config: RingConfig, total_cap: int, values: Dict[Monomial, Number]) -> "BivarTrunc":
        out = {}
        for (i, j), v in values.items():
            if i + j > total_cap:
                continue
            c = PadicScalar.coerce(config, v)
            if not c.is_exact_zero:
                out[(i, j)] = c
        return cls(config, total_cap, out)

    @classmethod
    def zero(cls, config: RingConfig, total_cap: int) -> "BivarTrunc":
        return cls(config, total_cap, {})

    @classmethod
    def constant(cls, config: RingConfig, total_cap: int, c: Number) -> "BivarTrunc":
        return cls.from_dict(config, total_cap, {(0, 0): c})

    @classmethod
    def from_univariate(cls, f: TruncSeries, total_cap: int, var: int = 0) -> "BivarTrunc":
        """f(X) (var = 0) ou f(Y) (var = 1)."""
        if f.cap < total_cap and not f.is_polynomial:
            raise CapTooSmallError(f"Série de cap {f.cap} < degré total {total_cap}")
        out = {}
        for k in range(min(f.cap, total_cap) + 1):
            c = f.coeffs[k]
            if not c.is_exact_zero:
                out[(k, 0) if var == 0 else (0, k)] = c
        return cls(f.config, total_cap, out)

    # ---------- accès ----------

    def __getitem__(self, mono: Monomial) -> PadicScalar:
        if sum(mono) > self.total_cap:
            raise IndexError(f"Monôme {mono} au-delà du degré total {self.total_cap}")
        return self.coeffs.get(mono, PadicScalar.zero(self.config))

    def column(self, j: int) -> TruncSeries:
        """s_j(X) = Σ_i c_{i,j} X^i, exacte pour i <= total_cap - j."""
        cap = self.total_cap - j
        values = [self[(i, j)] for i in range(cap + 1)]
        return TruncSeries(self.config, tuple(values), False)

    def transpose(self) -> "BivarTrunc":
        return BivarTrunc(self.config, self.total_cap, {(j, i): c for (i, j), c in self.coeffs.items()})

    def truncate(self, total_cap: int) -> "BivarTrunc":
        if total_cap >= self.total_cap:
            return self
        return BivarTrunc(self.config, total_cap,
                          {m: c for m, c in self.coeffs.items() if sum(m) <= total_cap})

    # ---------- anneau ----------

    def _check(self, other: "BivarTrunc") -> int:
        if other.config != self.config:
            raise ConfigMismatchError(f"{self.config.describe()} vs {other.config.describe()}")
        return min(self.total_cap, other.total_cap)

    def __add__(self, other: "BivarTrunc") -> "BivarTrunc":
        N = self._check(other)
        out = {m: c for m, c in self.coeffs.items() if sum(m) <= N}
        for m, c in other.coeffs.items():
            if sum(m) > N:
                continue
            out[m] = out[m] + c if m in out else c
        return BivarTrunc(self.config, N, {m: c for m, c in out.items() if not c.is_exact_zero})

    def __neg__(self) -> "BivarTrunc":
        return BivarTrunc(self.config, self.total_cap, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "BivarTrunc") -> "BivarTrunc":
        return self + (-other)

    def add_constant(self, c: PadicScalar) -> "BivarTrunc":
        out = dict(self.coeffs)
        out[(0, 0)] = out[(0, 0)] + c if (0, 0) in out else c
        return BivarTrunc(self.config, self.total_cap, out)

    def scalar_mul(self, s: Number) -> "BivarTrunc":
        s = PadicScalar.coerce(self.config, s)
        if s.is_exact_zero:
            return BivarTrunc.zero(self.config, self.total_cap)
        return BivarTrunc(self.config, self.total_cap, {m: c * s for m, c in self.coeffs.items()})

    def __mul__(self, other: "BivarTrunc") -> "BivarTrunc":
        N = self._check(other)
        pairs: Dict[Monomial, List] = defaultdict(list)
        right = list(other.coeffs.items())
        for (i1, j1), c1 in self.coeffs.items():
            d1 = i1 + j1
            if d1 > N:
                continue
            for (i2, j2), c2 in right:
                if d1 + i2 + j2 <= N:
                    pairs[(i1 + i2, j1 + j2)].append((c1, c2))
        out = {}
        for m, ps in pairs.items():
            c = fdot(self.config, ps)
            if not c.is_exact_zero:
                out[m] = c
        return BivarTrunc(self.config, N, out)

    def powers(self, n: int) -> List["BivarTrunc"]:
        """[B^0, B^1, ..., B^n]."""
        out = [BivarTrunc.constant(self.config, self.total_cap, 1)]
        for _ in range(n):
            out.append(out[-1] * self)
        return out

    @property
    def has_zero_constant(self) -> bool:
        return self[(0, 0)].is_exact_zero

    # ---------- substitutions ----------

    def substitute(self, A: "BivarTrunc", B: "BivarTrunc") -> "BivarTrunc":
        """S(A, B) = Σ_j (Σ_i c_{i,j} A^i) B^j, A et B sans terme constant."""
        if not (A.has_zero_constant and B.has_zero_constant):
            raise HypothesisError("substitute : termes constants non nuls")
        N = min(self.total_cap, A.total_cap, B.total_cap)
        Ap = A.truncate(N).powers(N)
        Bp = B.truncate(N).powers(N)
        total = BivarTrunc.zero(self.config, N)
        for j in range(N + 1):
            inner = BivarTrunc.zero(self.config, N - j)
            for i in range(N - j + 1):
                c = self.coeffs.get((i, j))
                if c is not None:
                    inner = inner + Ap[i].truncate(N - j).scalar_mul(c)
            if inner.coeffs:
                total = total + (BivarTrunc(self.config, N, inner.coeffs) * Bp[j])
        return total

    def evaluate_on_series(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        """S(a(X), b(X)), connu jusqu'à X^{min(total_cap, cap)}."""
        if not (a.coeffs[0].is_exact_zero and b.coeffs[0].is_exact_zero):
            raise HypothesisError("evaluate_on_series : termes constants non nuls")
        a, b, cap = a._aligned(b)
        cap = min(cap, self.total_cap)
        a, b = a.truncate(cap), b.truncate(cap)
        a_pows = [TruncSeries.constant(self.config, 1, cap)]
        for _ in range(cap):
            a_pows.append((a_pows[-1] * a).truncate(cap))
        total = TruncSeries.zero(self.config, cap)
        b_pow = TruncSeries.constant(self.config, 1, cap)
        for j in range(cap + 1):
            inner = TruncSeries.zero(self.config, cap)
            for i in range(cap - j + 1):
                c = self.coeffs.get((i, j))
                if c is not None:
                    inner = inner + a_pows[i].scalar_mul(c)
            if not inner.is_exact_zero:
                total = total + (inner * b_pow).truncate(cap)
            b_pow = (b_pow * b).truncate(cap)
        return TruncSeries(self.config, total.coeffs, False)

    # ---------- comparaison / rendu ----------

    def compare(self, other: "BivarTrunc") -> Comparison:
        N = self._check(other)
        return compare_dicts(self.config, self.coeffs, other.coeffs, N, 2)

    def min_valuation(self) -> Tuple[Union[int, float], Optional[Monomial]]:
        best: Union[int, float] = INF
        where = None
        for m in monomials(self.total_cap):
            c = self.coeffs.get(m)
            if c is not None and c.is_nonzero and c.valuation < best:
                best, where = c.valuation, m
        return best, where

    def to_strings(self) -> Dict[str, str]:
        return {f"{i},{j}": self.coeffs[(i, j)].render()
                for (i, j) in monomials(self.total_cap) if (i, j) in self.coeffs}


def compose_univariate(g: TruncSeries, B: BivarTrunc) -> BivarTrunc:
    """g(B(X, Y)) tronqué en degré total (Horner), B sans terme constant."""
    if not B.has_zero_constant:
        raise HypothesisError("compose_univariate : B(0, 0) ≠ 0")
    N = B.total_cap
    if g.cap < N and not g.is_polynomial:
        raise CapTooSmallError(f"Série de cap {g.cap} < degré total {N}")
    d = min(g.degree, N)
    if d < 0:
        return BivarTrunc.zero(B.config, N)
    acc = BivarTrunc.constant(B.config, N, g[d])
    for k in range(d - 1, -1, -1):
        acc = (acc * B).add_constant(g[k])
    return BivarTrunc(B.config, N, {m: c for m, c in acc.coeffs.items() if not c.is_exact_zero})


# ---------------------------------------------------------------------------
# Accumulateur à trois variables (associativité)
# ---------------------------------------------------------------------------

class TrivarAccumulator:
    """Coefficients de X^a Y^b Z^c, a + b + c <= total_cap, remplis par tranches bivariées."""

    def __init__(self, config: RingConfig, total_cap: int):
        self.config = config
        self.total_cap = total_cap
        self.terms: Dict[Monomial, PadicScalar] = {}

    def place(self, layer: BivarTrunc, fixed_axis: int, exponent: int) -> None:
        """Range les monômes (u, v) de layer en insérant `exponent` sur l'axe fixed_axis (0 = X, 2 = Z)."""
        for (u, v), c in layer.coeffs.items():
            if u + v + exponent > self.total_cap or c.is_exact_zero:
                continue
            mono = (exponent, u, v) if fixed_axis == 0 else (u, v, exponent)
            self.terms[mono] = self.terms[mono] + c if mono in self.terms else c

    def compare(self, other: "TrivarAccumulator") -> Comparison:
        return compare_dicts(self.config, self.terms, other.terms, self.total_cap, 3)
