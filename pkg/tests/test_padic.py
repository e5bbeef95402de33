import time
from fractions import Fraction

import pytest

from app.errors import (
    ConfigMismatchError,
    HypothesisError,
    NotAnMthPowerError,
    PadicZeroDivisionError,
    PrecisionExhaustedError,
    UnsupportedRamifiedRootError,
)
from app.padic import (
    INF,
    PadicScalar,
    RingConfig,
    certify_equal,
    fsum,
    mth_root_unit,
    padic_power,
    teichmuller,
    valp_int,
    valp_rational,
)


def test_valuations():
    assert valp_int(18, 3) == 2
    assert valp_int(0, 3) == INF
    assert valp_int(0, 3, bound=5) == 5
    assert valp_rational(Fraction(9, 2), 3) == 2
    assert valp_rational(Fraction(2, 27), 3) == -3


def test_ring_config_validation():
    with pytest.raises(ValueError):
        RingConfig(4)
    with pytest.raises(ValueError):
        RingConfig(3, rel_precision=0)
    with pytest.raises(ValueError):
        RingConfig(2, residue_degree=2, modulus=(1, 0, 1))  # X²+1 = (X+1)² mod 2
    assert RingConfig(2, residue_degree=2).modulus == (1, 1, 1)
    assert RingConfig(3, residue_degree=2).modulus == (1, 0, 1)


def test_from_int_splits_valuation():
    cfg = RingConfig(3, rel_precision=8)
    x = PadicScalar.from_int(cfg, 18)
    assert x.valuation == 2
    assert x.unit == (2,)
    assert x.exact_value == 18
    assert PadicScalar.from_int(cfg, 0).is_exact_zero


def test_invert_four_in_z3():
    cfg = RingConfig(3, rel_precision=3)
    inv = PadicScalar.from_int(cfg, 4).invert()
    assert inv.unit == (7,)
    assert inv.valuation == 0


def test_invert_zero():
    cfg = RingConfig(3)
    with pytest.raises(PadicZeroDivisionError):
        PadicScalar.zero(cfg).invert()
    with pytest.raises(PrecisionExhaustedError):
        PadicScalar.zero_at(cfg, 4).invert()


def test_rational_render():
    cfg = RingConfig(3, rel_precision=32)
    assert PadicScalar.from_rational(cfg, Fraction(1, 2)).render() == "1/2 + O(3^32)"
    assert PadicScalar.zero(cfg).render() == "0"
    assert PadicScalar.zero_at(cfg, 5).render() == "O(3^5)"


def test_arithmetic_agrees_with_rationals():
    cfg = RingConfig(5, rel_precision=20)
    a = PadicScalar.from_rational(cfg, Fraction(3, 10))
    b = PadicScalar.from_rational(cfg, Fraction(7, 4))
    assert (a * b).agrees(Fraction(21, 40))
    assert (a + b).agrees(Fraction(41, 20))
    assert (a - b).agrees(Fraction(-29, 20))
    assert (a / b).agrees(Fraction(12, 70))
    assert (a * b).valuation == -1


def test_sum_precision_is_min_absolute_precision():
    cfg = RingConfig(3, rel_precision=10)
    x = PadicScalar.from_int(cfg, 1)
    y = PadicScalar.zero_at(cfg, 4)
    s = fsum(cfg, [x, y])
    assert s.absolute_precision == 4
    assert s.agrees(1)


def test_cancellation_gives_zero_at_precision():
    cfg = RingConfig(3, rel_precision=10)
    d = PadicScalar.from_int(cfg, 5) - PadicScalar.from_int(cfg, 5)
    assert d.is_zero and not d.is_exact_zero
    assert d.valuation == 10


def test_config_mismatch():
    with pytest.raises(ConfigMismatchError):
        PadicScalar.from_int(RingConfig(3), 1) + PadicScalar.from_int(RingConfig(5), 1)


def test_certify_equal():
    cfg = RingConfig(3, rel_precision=32)
    five = PadicScalar.from_int(cfg, 5)
    assert certify_equal(five, PadicScalar.from_int(cfg, 5)) == 32
    assert certify_equal(five, PadicScalar.from_int(cfg, 2)) is None
    assert certify_equal(PadicScalar.zero(cfg), PadicScalar.zero(cfg)) == INF


def test_certify_equal_refuses_blind_comparison():
    cfg = RingConfig(3, rel_precision=32)
    with pytest.raises(PrecisionExhaustedError):
        certify_equal(PadicScalar.zero_at(cfg, 2), PadicScalar.from_int(cfg, 9))


def test_teichmuller_of_two_mod_125():
    cfg = RingConfig(5, rel_precision=3)
    w = teichmuller(2, cfg)
    assert w.unit == (57,)
    assert (w ** 4).agrees(1)
    assert w.exact_value is None


def test_teichmuller_of_one_stays_exact():
    cfg = RingConfig(7)
    assert teichmuller(1, cfg).exact_value == 1
    with pytest.raises(HypothesisError):
        teichmuller(0, cfg)


def test_teichmuller_generator_of_f4():
    cfg = RingConfig(2, residue_degree=2)
    xi = PadicScalar.generator(cfg)
    assert (xi ** 3).agrees(1)
    assert teichmuller((0, 1), cfg) == xi


def test_mth_root_unit():
    cfg = RingConfig(7, rel_precision=16)
    x = mth_root_unit(PadicScalar.from_int(cfg, 2), 2, 3)
    assert (x * x).agrees(2)
    assert x.residue() == (3,)
    assert x.exact_value is None


def test_mth_root_unit_errors():
    cfg = RingConfig(3)
    with pytest.raises(UnsupportedRamifiedRootError):
        mth_root_unit(PadicScalar.from_int(cfg, 1), 3, 1)
    with pytest.raises(NotAnMthPowerError):
        mth_root_unit(PadicScalar.from_int(cfg, 2), 2, 1)
    with pytest.raises(HypothesisError):
        mth_root_unit(PadicScalar.from_int(cfg, 3), 2, 1)


def test_padic_power_square_root_of_six():
    cfg = RingConfig(5, rel_precision=12)
    y = padic_power(PadicScalar.from_int(cfg, 6), Fraction(1, 2))
    assert (y * y).agrees(6)
    assert y.residue() == (1,)


def test_padic_power_requires_principal_unit():
    cfg = RingConfig(5)
    with pytest.raises(HypothesisError):
        padic_power(PadicScalar.from_int(cfg, 2), Fraction(1, 2))


def test_recast_regains_digits_for_exact_values():
    low = RingConfig(3, rel_precision=4)
    high = low.with_precision(12)
    x = PadicScalar.from_rational(low, Fraction(1, 2)).recast(high)
    assert x.known_precision == 12
    y = (PadicScalar.from_int(low, 2) * PadicScalar.from_int(low, 5)).recast(high)
    assert y.known_precision == 4


def test_teichmuller_lift_stays_fast_at_high_precision():
    cfg = RingConfig(5, rel_precision=64)
    start = time.perf_counter()
    w = teichmuller(2, cfg)
    assert time.perf_counter() - start < 2.0
    assert w.known_precision == 64
    assert (w ** 4).agrees(1)
    assert teichmuller((1, 1), RingConfig(7, residue_degree=2, rel_precision=48)).exact_value is None


def test_large_powers_forget_exact_value():
    cfg = RingConfig(5, rel_precision=8)
    two = PadicScalar.from_int(cfg, 2)
    assert (two ** 3).exact_value == 8
    big = two ** 5000
    assert big.exact_value is None
    assert big.agrees(pow(2, 5000, 5 ** 8))
    assert (PadicScalar.from_int(cfg, -1) ** 5001).exact_value == -1
