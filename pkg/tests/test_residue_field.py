import pytest

from app.padic import RingConfig
from app.residue_field import ResidueField, is_irreducible_mod_p, smallest_irreducible


def test_smallest_irreducible():
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert smallest_irreducible(5, 1) == (0, 1)
    assert not is_irreducible_mod_p((1, 0, 1), 2)


def test_f9_arithmetic():
    fld = RingConfig(3, residue_degree=2).field
    assert fld.order == 9
    assert fld.mul((0, 1), (0, 1)) == (2, 0)  # ξ² = -1
    for e in fld.elements():
        if not fld.is_zero(e):
            assert fld.mul(e, fld.inv(e)) == fld.one()
    assert fld.pow((1, 1), 8) == fld.one()


def test_inverse_of_zero():
    fld = ResidueField(5, (0, 1))
    with pytest.raises(ZeroDivisionError):
        fld.inv((0,))


def test_mth_powers_in_f5():
    fld = ResidueField(5, (0, 1))
    assert not fld.is_mth_power((2,), 2)
    assert fld.is_mth_power((4,), 2)
    assert fld.mth_roots((4,), 2) == [(2,), (3,)]


def test_canonical_order():
    fld = RingConfig(3, residue_degree=2).field
    assert fld.element(fld.index((2, 1))) == (2, 1)
    assert fld.roots_of([1, 0, 1]) == [(0, 1), (0, 2)]
    # coefficient de plus haut degré le plus significatif
    assert fld.index((2, 0)) < fld.index((0, 1)) < fld.index((1, 1))
    assert fld.mth_roots((1, 0), 2) == [(1, 0), (2, 0)]


def test_normalize_reduces_by_modulus():
    fld = RingConfig(3, residue_degree=2).field
    assert fld.normalize((0, 0, 1)) == (2, 0)
    assert fld.normalize(7) == (1, 0)
