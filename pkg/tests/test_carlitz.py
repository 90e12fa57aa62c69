import random

import pytest

from rayclass.carlitz import (
    carlitz_action,
    carlitz_rho,
    is_torsion_generator,
    torsion_poly,
    unit_group_order,
)
from rayclass.ffield import context
from rayclass.fqpoly import PolyFq, parse_poly


def random_poly(rng, ctx, max_deg=3):
    return PolyFq(ctx, [rng.randrange(ctx.q) for _ in range(rng.randrange(1, max_deg + 2))])


def test_rho_t_definition():
    # rho_t(y) = t*y + y^q
    K = context(3)
    rho = carlitz_rho(PolyFq.x(K))
    assert rho.tau_degree == 1
    assert rho.coeffs[0] == PolyFq.x(K)
    assert rho.coeffs[1] == PolyFq.one(K)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_rho_is_ring_homomorphism(p, e):
    K = context(p, e)
    rng = random.Random(p * 7 + e)
    for _ in range(25):
        a = random_poly(rng, K)
        b = random_poly(rng, K)
        assert carlitz_rho(a + b) == carlitz_rho(a) + carlitz_rho(b)
        assert carlitz_rho(a * b) == carlitz_rho(a).compose(carlitz_rho(b))
        assert carlitz_rho(a * b) == carlitz_rho(b).compose(carlitz_rho(a))


def test_rho_is_fq_linear_operator():
    K = context(3)
    rng = random.Random(31)
    for _ in range(10):
        a = random_poly(rng, K)
        rho = carlitz_rho(a)
        x = random_poly(rng, K, 4)
        y = random_poly(rng, K, 4)
        assert rho.evaluate_poly(x + y) == rho.evaluate_poly(x) + rho.evaluate_poly(y)
        for c in range(K.q):
            assert rho.evaluate_poly(x.scale(c)) == rho.evaluate_poly(x).scale(c)


def test_torsion_poly_degree_and_divisibility():
    K = context(3)
    for text, expect_deg in [("t", 3), ("t^2", 9), ("t^2+1", 9), ("t^2+t", 9)]:
        m = parse_poly(K, text)
        f = torsion_poly(m)
        # the m-torsion polynomial has q^(deg m) roots, all multiplicity 1,
        # and torsion_poly keeps the separable part with unit y-coefficient
        rho_m = carlitz_rho(m).to_ypoly()
        assert rho_m.degree == K.q**m.degree
        assert (rho_m % f).is_zero()
        assert expect_deg >= f.degree


def test_torsion_points_are_annihilated():
    K = context(2)
    m = parse_poly(K, "t^2+t+1")
    f = torsion_poly(m)
    # acting by m on any residue mod f gives 0
    from rayclass.ypoly import YPoly

    y = YPoly.y(K)
    acted = carlitz_action(m, y, f)
    assert acted.is_zero()


def test_unit_group_order():
    K = context(3)
    assert unit_group_order(parse_poly(K, "t")) == 2
    assert unit_group_order(parse_poly(K, "t^2+1")) == 8
    assert unit_group_order(parse_poly(K, "t^2+t")) == 4
    assert unit_group_order(parse_poly(K, "t^2")) == 6


def test_torsion_generator_detection():
    K = context(3)
    m = parse_poly(K, "t^2+1")
    f = torsion_poly(m)
    from rayclass.ypoly import YPoly

    y = YPoly.y(K)
    assert is_torsion_generator(y % f, m)
    # zero is never a generator
    assert not is_torsion_generator(YPoly.zero(K), m)
