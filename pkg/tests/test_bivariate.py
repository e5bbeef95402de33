import pytest

from app.bivariate import BivarTrunc, TrivarAccumulator, compose_univariate, monomials
from app.errors import CapTooSmallError, HypothesisError
from app.padic import RingConfig
from app.series import TruncSeries

CFG = RingConfig(5, rel_precision=12)


def law(values, total_cap=4):
    return BivarTrunc.from_dict(CFG, total_cap, values)


def test_monomial_order():
    assert list(monomials(2)) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(list(monomials(2, 3))) == 10


def test_from_dict_drops_high_degrees_and_zeros():
    B = law({(1, 0): 1, (0, 1): 0, (3, 3): 7})
    assert set(B.coeffs) == {(1, 0)}
    with pytest.raises(IndexError):
        B[(5, 0)]


def test_square_of_sum():
    s = law({(1, 0): 1, (0, 1): 1}, 2)
    sq = s * s
    assert sq.compare(law({(2, 0): 1, (1, 1): 2, (0, 2): 1}, 2)).equal


def test_compose_univariate():
    g = TruncSeries.from_values(CFG, [0, 1, 1], 4, True)
    B = law({(1, 0): 1, (0, 1): 1}, 2)
    out = compose_univariate(g, B)
    expected = law({(1, 0): 1, (0, 1): 1, (2, 0): 1, (1, 1): 2, (0, 2): 1}, 2)
    assert out.compare(expected).equal
    with pytest.raises(HypothesisError):
        compose_univariate(g, law({(0, 0): 1}, 2))


def test_from_univariate_needs_enough_cap():
    s = TruncSeries.from_values(CFG, [0, 1, 1], 2, False)
    with pytest.raises(CapTooSmallError):
        BivarTrunc.from_univariate(s, 4)
    B = BivarTrunc.from_univariate(s, 2, var=1)
    assert B[(0, 2)].agrees(1)


def test_substitute_identity():
    S = law({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    X = law({(1, 0): 1})
    Y = law({(0, 1): 1})
    assert S.substitute(X, Y).compare(S).equal
    assert S.substitute(Y, X).compare(S.transpose()).equal


def test_evaluate_on_series():
    S = law({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    x = TruncSeries.from_values(CFG, [0, 1], 4, False)
    out = S.evaluate_on_series(x, x)
    assert out[1].agrees(2) and out[2].agrees(1)
    assert out[3].is_zero


def test_column_and_min_valuation():
    S = law({(1, 0): 1, (0, 1): 1, (2, 1): 5, (1, 2): 25})
    col = S.column(1)
    assert col[0].agrees(1) and col[2].agrees(5)
    assert col.cap == 3
    assert S.min_valuation() == (0, (1, 0))


def test_trivariate_accumulator():
    acc = TrivarAccumulator(CFG, 3)
    acc.place(law({(1, 0): 1, (0, 1): 2}, 3), 2, 1)
    acc.place(law({(1, 0): 1}, 3), 0, 2)
    assert set(acc.terms) == {(1, 0, 1), (0, 1, 1), (2, 1, 0)}
    other = TrivarAccumulator(CFG, 3)
    other.place(law({(1, 0): 1}, 3), 2, 1)
    cmp = acc.compare(other)
    assert not cmp.equal
