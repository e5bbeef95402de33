from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_gcdex,
    gf_irreducible_p,
    gf_mul,
    gf_pow_mod,
    gf_rem,
    gf_strip,
)

# Élément de F_{p^s} : tuple (a_0, ..., a_{s-1}) de résidus mod p,
# vu comme a_0 + a_1 x + ... dans F_p[x]/(modulus mod p).
Residue = Tuple[int, ...]

# Au-delà, la recherche exhaustive des racines m-ièmes n'est plus raisonnable.
MAX_SEARCH_ORDER = 2 ** 16


def _to_gf(coeffs: Sequence[int], p: int) -> List[int]:
    """Coefficients croissants -> liste galoistools (degré décroissant), réduite mod p."""
    return gf_strip([int(c) % p for c in reversed(coeffs)])


def _from_gf(poly: Sequence[int], size: int) -> Residue:
    out = [int(c) for c in reversed(poly)]
    if len(out) > size:
        raise ValueError(f"Polynôme de degré {len(out) - 1} hors du corps de degré {size}")
    return tuple(out + [0] * (size - len(out)))


def is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    """Test d'irréductibilité de la réduction mod p (monique supposé)."""
    poly = _to_gf(modulus, p)
    if len(poly) - 1 != len(modulus) - 1:
        return False
    if len(poly) == 2:
        return True
    return bool(gf_irreducible_p(poly, p, ZZ))


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, degree: int) -> Tuple[int, ...]:
    """
    Plus petit polynôme unitaire irréductible de degré donné sur F_p.

    Ordre : celui des tuples de coefficients lus du degré degree-1 vers le
    degré 0, i.e. l'ordre numérique de sum(c_i p^i). Pour degree = 1 on obtient X.
    """
    for index in range(p ** degree):
        coeffs = []
        n = index
        for _ in range(degree):
            n, r = divmod(n, p)
            coeffs.append(r)
        candidate = tuple(coeffs) + (1,)
        if is_irreducible_mod_p(candidate, p):
            return candidate
    raise ValueError(f"Aucun irréductible de degré {degree} sur F_{p} (impossible)")


@dataclass(frozen=True)
class ResidueField:
    """Corps résiduel F_{p^s} = F_p[x]/(modulus mod p)."""
    p: int
    modulus: Tuple[int, ...]  # coefficients croissants, unitaire, degré s

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def order(self) -> int:
        return self.p ** self.degree

    @property
    def _mod(self) -> List[int]:
        return _to_gf(self.modulus, self.p)

    # ---------- éléments ----------

    def normalize(self, e: Union[int, Sequence[int]]) -> Residue:
        if isinstance(e, int):
            e = (e,)
        e = [int(c) % self.p for c in e]
        if len(e) > self.degree:
            # réduction par le module (entrée donnée comme polynôme quelconque)
            return _from_gf(gf_rem(_to_gf(e, self.p), self._mod, self.p, ZZ), self.degree)
        return tuple(e + [0] * (self.degree - len(e)))

    def zero(self) -> Residue:
        return (0,) * self.degree

    def one(self) -> Residue:
        return (1,) + (0,) * (self.degree - 1)

    def is_zero(self, e: Residue) -> bool:
        return not any(c % self.p for c in e)

    def index(self, e: Residue) -> int:
        """Rang de e dans l'ordre canonique : sum(c_i p^i), coefficient de plus haut degré le plus significatif."""
        return sum((c % self.p) * self.p ** i for i, c in enumerate(e))

    def element(self, index: int) -> Residue:
        out = []
        for _ in range(self.degree):
            index, r = divmod(index, self.p)
            out.append(r)
        return tuple(out)

    def elements(self) -> Iterator[Residue]:
        for i in range(self.order):
            yield self.element(i)

    # ---------- arithmétique ----------

    def add(self, a: Residue, b: Residue) -> Residue:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a: Residue, b: Residue) -> Residue:
        prod = gf_mul(_to_gf(a, self.p), _to_gf(b, self.p), self.p, ZZ)
        return _from_gf(gf_rem(prod, self._mod, self.p, ZZ), self.degree)

    def pow(self, a: Residue, n: int) -> Residue:
        if n < 0:
            return self.pow(self.inv(a), -n)
        return _from_gf(gf_pow_mod(_to_gf(a, self.p), n, self._mod, self.p, ZZ), self.degree)

    def inv(self, a: Residue) -> Residue:
        if self.is_zero(a):
            raise ZeroDivisionError("Inversion de 0 dans le corps résiduel")
        s, _t, h = gf_gcdex(_to_gf(a, self.p), self._mod, self.p, ZZ)
        if [int(c) for c in h] != [1]:
            raise ValueError(f"Module {self.modulus} non irréductible mod {self.p}")
        return _from_gf(s, self.degree)

    def is_mth_power(self, c: Residue, m: int) -> bool:
        """Critère c^{(q-1)/gcd(m, q-1)} = 1 dans F_q^* (cyclique)."""
        from math import gcd
        q1 = self.order - 1
        return self.pow(c, q1 // gcd(m, q1)) == self.one()

    def mth_roots(self, c: Residue, m: int) -> List[Residue]:
        """Toutes les racines m-ièmes de c, dans l'ordre canonique (recherche exhaustive)."""
        if self.order > MAX_SEARCH_ORDER:
            raise ValueError(f"Corps résiduel d'ordre {self.order} trop grand pour la recherche exhaustive")
        c = self.normalize(c)
        return [e for e in self.elements() if not self.is_zero(e) and self.pow(e, m) == c]

    def roots_of(self, poly: Sequence[int]) -> List[Residue]:
        """Racines dans ce corps d'un polynôme à coefficients dans F_p (croissants)."""
        if self.order > MAX_SEARCH_ORDER:
            raise ValueError(f"Corps résiduel d'ordre {self.order} trop grand pour la recherche exhaustive")
        out = []
        for e in self.elements():
            acc = self.zero()
            for c in reversed(poly):
                acc = self.add(self.mul(acc, e), self.normalize(c))
            if self.is_zero(acc):
                out.append(e)
        return out
