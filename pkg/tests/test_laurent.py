import random

import pytest

from rayclass.ffield import context
from rayclass.fqpoly import PolyFq, parse_poly
from rayclass.laurent import LaurentSeries, PrecisionError, newton_polygon, series_roots


def random_series(rng, ctx, prec=20):
    val = rng.randrange(-5, 5)
    coeffs = [rng.randrange(ctx.q) for _ in range(prec - val)]
    return LaurentSeries(ctx, 1, val, coeffs, prec)


def test_ring_axioms():
    K = context(3)
    rng = random.Random(21)
    for _ in range(30):
        a, b, c = (random_series(rng, K) for _ in range(3))
        assert (a + b).stream(8) == (b + a).stream(8)
        ab, ba = a * b, b * a
        assert ab.val == ba.val and ab.stream(6) == ba.stream(6)
        lhs = a * (b + c)
        rhs = a * b + a * c
        n = min(lhs.nterms(), rhs.nterms(), 6)
        assert lhs.stream(n) == rhs.stream(n)


def test_valuation_and_precision():
    K = context(5)
    s = LaurentSeries(K, 1, -2, [3, 0, 1], 10)
    assert s.valuation() == -2
    assert s.coeff(-2) == 3
    assert s.coeff(5) == 0  # inside the window, beyond stored terms
    with pytest.raises(PrecisionError):
        s.coeff(10)
    with pytest.raises(PrecisionError):
        LaurentSeries.zero(K, 1, 10).valuation()


def test_inverse_and_division():
    K = context(3)
    rng = random.Random(22)
    for _ in range(20):
        a = random_series(rng, K)
        if a.is_zero_window():
            continue
        one = a * a.inv()
        assert one.valuation() == 0
        assert one.stream(min(6, one.nterms())) == (1,) + (0,) * (min(6, one.nterms()) - 1)


def test_from_poly_t_exponent_convention():
    # t has valuation -1 at infinity: t^d maps to exponent -d
    K = context(3)
    f = parse_poly(K, "t^2+2")
    s = LaurentSeries.from_poly_t(f, 1, 10)
    assert s.valuation() == -2
    assert s.coeff(-2) == 1 and s.coeff(0) == 2 and s.coeff(-1) == 0


def test_pth_power_is_frobenius_on_series():
    K = context(2, 2)
    rng = random.Random(23)
    a = random_series(rng, K, 12)
    sq = a * a
    fr = a.pth_power(1)
    n = min(sq.nterms(), fr.nterms(), 6)
    assert sq.stream(n) == fr.stream(n)


def test_newton_polygon_segments():
    # points of y^2 - u: one hull segment from (0,1) to (2,0), rise -1
    assert newton_polygon([(0, 1), (2, 0)]) == [(0, 2, -1)]
    # a middle point above the hull is dropped
    assert newton_polygon([(0, 0), (1, 5), (2, 0)]) == [(0, 2, 0)]
    # a middle point below the hull creates two segments
    assert newton_polygon([(0, 0), (1, -3), (2, 0)]) == [(0, 1, -3), (1, 2, 3)]


def test_series_roots_satisfy_polynomial():
    # y^2 + y + u over F_2: two distinct roots in F_2((u))
    K = context(2)
    prec = 24
    one = LaurentSeries.const(K, 1, 1, prec)
    u = LaurentSeries.monomial(K, 1, 1, 1, prec)
    coeffs = {2: one, 1: one, 0: u}
    roots = series_roots(coeffs, prec)
    assert len(roots) == 2
    for r in roots:
        value = r * r + r + u
        assert value.is_zero_window()


def test_root_valuations_stable_under_precision():
    K = context(3)
    vals = []
    for prec in (12, 24):
        one = LaurentSeries.const(K, 1, 1, prec)
        u = LaurentSeries.monomial(K, 1, 1, 1, prec)
        # y^3 - y - 1/u: integral closure style equation with a pole
        coeffs = {3: one, 1: -one, 0: -(u.inv())}
        roots = series_roots(coeffs, prec)
        vals.append(sorted(r.valuation() for r in roots))
    assert vals[0] == vals[1]
