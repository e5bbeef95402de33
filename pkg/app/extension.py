from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence, Union

from sympy import divisors

from app.errors import HypothesisError, InvariantViolationError, UnsupportedRamifiedRootError
from app.padic import PadicScalar, RingConfig
from app.residue_field import Residue, smallest_irreducible

if TYPE_CHECKING:
    from app.series import TruncSeries

log = logging.getLogger(__name__)


def _horner(coeffs: Sequence[PadicScalar], x: PadicScalar) -> PadicScalar:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _lift_root(poly: Sequence[int], approx: Residue, target: RingConfig) -> PadicScalar:
    """Relève par Hensel une racine simple mod p d'un polynôme entier."""
    P = [PadicScalar.from_int(target, c) for c in poly]
    dP = [P[i] * i for i in range(1, len(P))]
    y = PadicScalar.from_poly(target, approx)
    for _ in range(target.rel_precision.bit_length() + 3):
        val = _horner(P, y)
        if val.is_zero:
            return y
        y = y - val / _horner(dP, y)
    raise InvariantViolationError(f"Relèvement de Hensel non convergent pour {poly}")


@dataclass(frozen=True)
class Embedding:
    """Plongement O_K -> O_L donné par l'image du générateur de K."""
    source: RingConfig
    target: RingConfig
    generator_image: PadicScalar

    @classmethod
    def identity(cls, config: RingConfig) -> "Embedding":
        return cls(config, config, PadicScalar.generator(config))

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    @property
    def degree(self) -> int:
        return self.target.residue_degree // self.source.residue_degree

    def scalar(self, a: PadicScalar) -> PadicScalar:
        if self.is_identity:
            return a
        if a.config != self.source:
            raise HypothesisError(f"{a.render()} ne vit pas sur {self.source.describe()}")
        if a.exact_value is not None:
            return PadicScalar.from_rational(self.target, a.exact_value)
        if a.unit is None:
            return PadicScalar.zero_at(self.target, a.valuation)
        coeffs = [PadicScalar.from_int(self.target, c) for c in a.unit]
        img = _horner(coeffs, self.generator_image).truncate_precision(a.known_precision)
        return img * PadicScalar.from_rational(self.target, Fraction(self.source.p) ** a.valuation)

    def residue(self, c: Residue) -> Residue:
        if self.is_identity:
            return c
        g = self.generator_image.residue()
        fld = self.target.field
        acc = fld.zero()
        for coef in reversed(c):
            acc = fld.add(fld.mul(acc, g), fld.normalize(coef))
        return acc

    def series(self, f: "TruncSeries") -> "TruncSeries":
        if self.is_identity:
            return f
        return f.map_coefficients(self.scalar, self.target)

    def describe(self) -> str:
        if self.is_identity:
            return "identité"
        return f"{self.source.describe()} -> {self.target.describe()} (ξ ↦ {self.generator_image.render()})"


@dataclass(frozen=True)
class ResidueRoot:
    root: Residue            # dans le corps résiduel de config
    extension_degree: int    # t = [F_{p^{st}} : F_{p^s}]
    config: RingConfig
    embedding: Embedding


def extend_ring(config: RingConfig, t: int) -> Embedding:
    """Extension non ramifiée de degré relatif t, module minimal lexicographique."""
    if t == 1:
        return Embedding.identity(config)
    s = config.residue_degree * t
    target = RingConfig(config.p, s, smallest_irreducible(config.p, s), config.rel_precision)
    if config.residue_degree == 1:
        image = PadicScalar.generator(config)
        image = PadicScalar.coerce(target, image.exact_value)
    else:
        roots = target.field.roots_of(config.modulus)
        if not roots:
            raise InvariantViolationError(f"{config.modulus} sans racine dans F_{config.p}^{s}")
        image = _lift_root(config.modulus, roots[0], target)
    log.debug("extension de degré %s : %s", t, target.describe())
    return Embedding(config, target, image)


def residue_mth_root(c: Union[int, Sequence[int]], m: int, config: RingConfig) -> ResidueRoot:
    """
    Racine m-ième de c dans la plus petite extension F_{p^{st}} qui en contient une.

    Choix canonique : le plus petit élément (ordre lexicographique des coefficients).
    """
    fld = config.field
    c = fld.normalize(c)
    if fld.is_zero(c):
        raise HypothesisError("Racine m-ième de 0")
    if math.gcd(m, config.p) != 1:
        raise UnsupportedRamifiedRootError(f"Racine {m}-ième avec p = {config.p}")
    if fld.is_mth_power(c, m):
        return ResidueRoot(fld.mth_roots(c, m)[0], 1, config, Embedding.identity(config))

    # ordre multiplicatif de c, puis plus petit t tel que ord(c) | (q^t - 1)/gcd(m, q^t - 1)
    order = next(d for d in divisors(fld.order - 1) if fld.pow(c, d) == fld.one())
    t = 2
    while True:
        qt1 = fld.order ** t - 1
        if (qt1 // math.gcd(m, qt1)) % order == 0:
            break
        t += 1
    emb = extend_ring(config, t)
    image = emb.residue(c)
    root = emb.target.field.mth_roots(image, m)[0]
    log.info("racine %s-ième de %s : extension de degré %s", m, c, t)
    return ResidueRoot(root, t, emb.target, emb)
