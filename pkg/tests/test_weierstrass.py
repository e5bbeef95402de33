from fractions import Fraction

import pytest

from app.errors import HypothesisError, InfiniteWidegError
from app.padic import PadicScalar, RingConfig, certify_equal
from app.series import TruncSeries
from app.weierstrass import (
    distinguished_part,
    newton_polygon,
    poly_divmod,
    resultant,
    root_valuations,
    simple_roots_certificate,
    weierstrass_degree,
    weierstrass_prep,
)

CFG3 = RingConfig(3, rel_precision=20)


def poly(values, cap=8, cfg=CFG3):
    return TruncSeries.from_values(cfg, values, cap, True)


def test_weierstrass_degree():
    assert weierstrass_degree(poly([0, 9, 6, 1])).value == 3
    assert weierstrass_degree(poly([0, 3, 0, 1])).value == 3
    assert weierstrass_degree(poly([0, 4, 1], cfg=RingConfig(2))).value == 2
    wd = weierstrass_degree(poly([0, 3, 9]))
    assert not wd.finite and wd.status == "infinite"
    with pytest.raises(InfiniteWidegError):
        wd.require()
    cut = TruncSeries.from_values(CFG3, [0, 3, 9], 4, False)
    assert weierstrass_degree(cut).status == "beyond-cap"


def test_poly_divmod():
    q, r = poly_divmod(poly([0, 9, 6, 1]), poly([3, 1]))
    assert q.compare(poly([0, 3, 1])).equal
    assert r.is_exact_zero or all(c.is_zero for c in r.coeffs)
    with pytest.raises(HypothesisError):
        poly_divmod(poly([0, 1]), poly([1, 3]))


def test_prep_of_chebyshev_cubic():
    split = weierstrass_prep(poly([0, 9, 6, 1]))
    assert split.distinguished.compare(poly([9, 6, 1])).equal
    assert split.unit[0].agrees(1)
    assert split.degree == 2


def test_prep_recombines():
    f = poly([0, 3, 1, 1])
    split = weierstrass_prep(f)
    assert split.degree == 1
    assert split.recombine().agrees(f)
    assert split.distinguished[0].valuation == 1


def test_prep_of_truncated_series():
    f = TruncSeries.from_values(CFG3, [0, 3, 3, 1, 1, 1, 1, 1, 1], 8, False)
    split = weierstrass_prep(f)
    assert split.degree == 2
    assert split.unit[0].is_unit


def test_distinguished_part_extracts_content():
    dp = distinguished_part(poly([3, 3, 3]).derivative())
    assert dp.content_valuation == 1
    assert dp.degree == 0


def test_newton_polygon_and_root_valuations():
    f = poly([0, 9, 6, 1])
    np_ = newton_polygon(f)
    assert np_.vertices == ((1, Fraction(2)), (3, Fraction(0)))
    assert root_valuations(f) == [(Fraction(1), 2)]
    g = poly([0, 27, 0, 3, 1])
    assert root_valuations(g) == [(Fraction(1), 3)]


def test_resultant_of_linear_polynomials():
    res = resultant(poly([3, 1]), poly([-3, 1]))
    assert certify_equal(res, PadicScalar.from_int(CFG3, -6)) is not None
    assert resultant(poly([0, 1]), poly([])).is_exact_zero


def test_simple_roots():
    assert simple_roots_certificate(poly([0, 3, 0, 1])).simple
    cert = simple_roots_certificate(poly([0, 0, 1]))
    assert not cert.simple and cert.method == "order"
