import random

import pytest

from rayclass.ffield import context
from rayclass.fqpoly import PolyFq, monic_irreducibles, monic_polys, parse_poly


def random_poly(rng, ctx, max_deg):
    return PolyFq(ctx, [rng.randrange(ctx.q) for _ in range(rng.randrange(1, max_deg + 2))])


def test_ring_axioms():
    rng = random.Random(1)
    K = context(3)
    for _ in range(50):
        a, b, c = (random_poly(rng, K, 5) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()


def test_divmod_round_trip():
    rng = random.Random(2)
    K = context(5)
    for _ in range(50):
        a = random_poly(rng, K, 8)
        b = random_poly(rng, K, 4)
        if b.is_zero():
            continue
        quo, rem = divmod(a, b)
        assert quo * b + rem == a
        assert rem.degree < b.degree


def test_gcd_and_xgcd():
    K = context(3)
    rng = random.Random(3)
    for _ in range(30):
        a = random_poly(rng, K, 6)
        b = random_poly(rng, K, 6)
        if a.is_zero() or b.is_zero():
            continue
        g, u, v = a.xgcd(b)
        assert u * a + v * b == g
        assert (a % g).is_zero() and (b % g).is_zero()


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_factor_remultiplies(p, e):
    K = context(p, e)
    rng = random.Random(p * 10 + e)
    for _ in range(40):
        f = random_poly(rng, K, 7)
        if f.degree < 1:
            continue
        facs = f.factor()
        prod = PolyFq.const(K, f.lead())
        for g, mult in facs:
            assert g.is_monic()
            assert g.degree >= 1
            prod = prod * g.pow(mult)
        assert prod == f


def test_factors_are_irreducible():
    K = context(3)
    f = parse_poly(K, "t^6+t^2+2*t")
    for g, _ in f.factor():
        # an irreducible g has no root structure splitting: gcd with x^(q^i)-x
        # below its degree stays trivial
        x = PolyFq.x(K)
        for i in range(1, g.degree):
            power = x.pow_mod(K.q**i, g)
            assert g.gcd(power - x).degree == 0


def test_monic_enumeration_counts():
    K = context(3)
    assert sum(1 for _ in monic_polys(K, 2)) == 9
    # the number of monic irreducible cubics over F_3 is (27-3)/3 = 8
    assert sum(1 for _ in monic_irreducibles(K, 3)) == 8


def test_parse_format_round_trip():
    for p, e, text in [(3, 1, "t^3+2*t+1"), (2, 2, "t^2+g*t+g^2"), (5, 1, "t")]:
        K = context(p, e)
        f = parse_poly(K, text)
        assert parse_poly(K, f.format()) == f


def test_squarefree_decomposition():
    K = context(2)
    t = PolyFq.x(K)
    f = t.pow(2) * (t + PolyFq.one(K)).pow(3)
    parts = f.squarefree_decomposition()
    prod = PolyFq.one(K)
    for g, mult in parts:
        assert g.is_squarefree()
        prod = prod * g.pow(mult)
    assert prod == f


def test_roots():
    K = context(5)
    f = parse_poly(K, "t^2+4")  # (t-1)(t+1) over F_5
    assert f.roots() == [1, 4]
