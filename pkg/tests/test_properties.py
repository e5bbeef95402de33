import random
from fractions import Fraction

import pytest
import sympy as sp

from app.dynamics import lubin_log, newton_root_bound_check, solve_commuting
from app.formal_group import build_group_law, endomorphism
from app.padic import PadicScalar, RingConfig
from app.semiconj import assemble_from_f0, build_f0
from app.series import TruncSeries
from app.weierstrass import weierstrass_prep

X = sp.symbols("X")
SEEDS = range(200)


def random_poly(rng, degree, first):
    return [0, first] + [rng.randint(-20, 20) for _ in range(degree - 1)]


@pytest.mark.parametrize("seed", SEEDS)
def test_product_matches_sympy(seed):
    rng = random.Random(seed)
    cfg = RingConfig(5, rel_precision=12)
    a = [rng.randint(-50, 50) for _ in range(5)]
    b = [rng.randint(-50, 50) for _ in range(4)]
    prod = TruncSeries.polynomial(cfg, a) * TruncSeries.polynomial(cfg, b)
    oracle = sp.Poly(sp.Poly(list(reversed(a)), X) * sp.Poly(list(reversed(b)), X), X)
    for k in range(8):
        assert prod[k].agrees(int(oracle.coeff_monomial(X ** k)))


@pytest.mark.parametrize("seed", SEEDS)
def test_composition_matches_sympy(seed):
    rng = random.Random(seed)
    cfg = RingConfig(3, rel_precision=16)
    f = random_poly(rng, 3, rng.choice([1, 2, 3]))
    g = random_poly(rng, 2, rng.choice([1, 2, 3]))
    F = TruncSeries.from_values(cfg, f, 6, True)
    G = TruncSeries.from_values(cfg, g, 6, True)
    oracle = sp.Poly(sp.Poly(list(reversed(f)), X).compose(sp.Poly(list(reversed(g)), X)), X)
    comp = F.compose(G)
    assert comp.is_polynomial
    for k in range(7):
        assert comp[k].agrees(int(oracle.coeff_monomial(X ** k)))


@pytest.mark.parametrize("seed", SEEDS)
def test_composition_inverse(seed):
    rng = random.Random(seed)
    cfg = RingConfig(7, rel_precision=16)
    f = TruncSeries.from_values(cfg, random_poly(rng, 4, rng.randint(1, 6)), 8, True)
    g = f.comp_inverse()
    ident = TruncSeries.X(cfg, 8)
    assert f.compose(g).agrees(ident)
    assert g.compose(f).agrees(ident)


@pytest.mark.parametrize("seed", SEEDS)
def test_commuters_commute(seed):
    rng = random.Random(seed)
    cfg = RingConfig(5, rel_precision=20)
    f = TruncSeries.from_values(cfg, random_poly(rng, 3, 5), 7, True)
    a = rng.randint(1, 4)
    sol = solve_commuting(f, a)
    assert sol.series[1].agrees(a)
    assert f.compose(sol.series).agrees(sol.series.compose(f))


@pytest.mark.parametrize("seed", SEEDS)
def test_lubin_log_functional_equation(seed):
    rng = random.Random(seed)
    cfg = RingConfig(3, rel_precision=20)
    f = TruncSeries.from_values(cfg, random_poly(rng, 3, 3), 7, True)
    L = lubin_log(f)
    assert L[1].agrees(1)
    assert L.compose(f).agrees(L.scalar_mul(3))


@pytest.mark.parametrize("seed", SEEDS)
def test_inverse_of_unit_series(seed):
    rng = random.Random(seed)
    cfg = RingConfig(2, rel_precision=16)
    values = [1] + [rng.randint(-9, 9) for _ in range(5)]
    s = TruncSeries.from_values(cfg, values, 8, True)
    one = TruncSeries.constant(cfg, 1, 8)
    assert (s * s.inverse()).agrees(one)


@pytest.mark.parametrize("seed", SEEDS)
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    cfg = RingConfig(3, rel_precision=16)
    F, G, H = (TruncSeries.from_values(cfg, random_poly(rng, 3, rng.randint(1, 9)), 6, True)
               for _ in range(3))
    assert F.compose(G.compose(H)).agrees(F.compose(G).compose(H))
    assert F.compose(TruncSeries.X(cfg, 6)).agrees(F)


def _unit(rng, p):
    return p * rng.randint(-5, 5) + rng.randint(1, p - 1)


@pytest.mark.parametrize("seed", SEEDS)
def test_weierstrass_prep_multiplies_back(seed):
    rng = random.Random(seed)
    cfg = RingConfig(3, rel_precision=16)
    values = [0, 3 * rng.randint(-9, 9), 3 * rng.randint(-9, 9), _unit(rng, 3),
              rng.randint(-9, 9), rng.randint(-9, 9)]
    f = TruncSeries.from_values(cfg, values, 5, True)
    split = weierstrass_prep(f)
    assert split.degree == 2
    assert split.recombine().agrees(f)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_iterate_roots_respect_valuation_bound(seed, n):
    rng = random.Random(seed)
    cfg = RingConfig(3, rel_precision=24)
    f = TruncSeries.from_values(cfg, [0, 3, 3 * rng.randint(-9, 9), 1], 3, True)
    rb = newton_root_bound_check(f, n)
    assert rb.bound == Fraction(1, 3 ** n - 1)
    assert rb.holds
    assert sum(k for _, k in rb.root_valuations) == 3 ** n - 1


@pytest.mark.parametrize("seed", SEEDS)
def test_commuters_are_multiplicative(seed):
    rng = random.Random(seed)
    cfg = RingConfig(5, rel_precision=20)
    f = TruncSeries.from_values(cfg, random_poly(rng, 3, 5), 6, True)
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    ua, ub = solve_commuting(f, a).series, solve_commuting(f, b).series
    assert ua.compose(ub).agrees(solve_commuting(f, a * b).series)


# (p, m, constante, degré d'extension attendu) ; -1 n'est pas un carré modulo 3 et
# 3·w³ ∈ {3, 4} n'est un cube ni dans F_7 ni dans F_49
ROUNDTRIP_CASES = [(3, 2, 1, 1), (3, 2, -1, 2), (2, 3, 1, 1), (7, 3, 1, 1), (7, 3, 3, 3)]


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("p, m, const, degree", ROUNDTRIP_CASES)
def test_build_f0_roundtrip(seed, p, m, const, degree):
    rng = random.Random(seed)
    cfg = RingConfig(p, rel_precision=16)
    # f₀ = X·G(X^m), G = p·b + ... + c·Y^k + ... avec b, c unités et p | 1 + mk
    k = 2 if p == 7 else 1
    G = ([p * _unit(rng, p)] + [p * rng.randint(-5, 5) for _ in range(k - 1)]
         + [_unit(rng, p)] + [p * rng.randint(-5, 5) for _ in range(2)])
    cap = m * (len(G) - 1) + 1
    values = [0] * (cap + 1)
    for i, c in enumerate(G):
        values[m * i + 1] = c
    f0 = TruncSeries.from_values(cfg, values, cap, True)
    f = assemble_from_f0(f0, m).scalar_mul(const)
    sc = build_f0(f, m)
    assert sc.extension_degree == degree
    original = sc.embedding.series(f0)
    ratio = sc.f0[1] / original[1]
    assert (ratio ** m).agrees(const)
    assert sc.f0.agrees(original.scalar_mul(ratio))


@pytest.fixture(scope="module")
def cheby_law():
    cfg = RingConfig(3, rel_precision=24)
    return build_group_law(lubin_log(TruncSeries.from_values(cfg, [0, 3, 0, 1], 8, True)), 5)


@pytest.mark.parametrize("seed", SEEDS)
def test_endomorphism_ring_action(cheby_law, seed):
    rng = random.Random(seed)
    a, b = rng.randint(1, 12), rng.randint(1, 12)
    ea, eb = endomorphism(cheby_law, a), endomorphism(cheby_law, b)
    assert ea.compose(eb).agrees(endomorphism(cheby_law, a * b))
    assert cheby_law.S.evaluate_on_series(ea, eb).agrees(endomorphism(cheby_law, a + b))


def test_rational_reconstruction_in_render():
    cfg = RingConfig(7, rel_precision=10)
    for q in (Fraction(3, 4), Fraction(-5, 2), Fraction(1, 49)):
        assert PadicScalar.from_rational(cfg, q).render().startswith(str(q))
