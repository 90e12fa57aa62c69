import pytest

from rayclass.carlitz import unit_group_order
from rayclass.ffield import context
from rayclass.fqpoly import parse_poly
from rayclass.galois import GaloisGroup


def make_group(p, e, m):
    ctx = context(p, e)
    return GaloisGroup(parse_poly(ctx, m))


@pytest.mark.parametrize(
    "p,e,m",
    [
        (2, 1, "t^3+t+1"),
        (2, 1, "t^3"),
        (3, 1, "t^2+1"),
        (3, 1, "t^3+2*t"),
        (5, 1, "t^2+2"),
        (5, 1, "t^3+t^2"),
        (2, 2, "t^3+g^2*t^2"),
    ],
)
def test_group_axioms_and_order(p, e, m):
    G = make_group(p, e, m)
    ctx = context(p, e)
    mm = parse_poly(ctx, m)
    assert G.order == unit_group_order(mm) // (ctx.q - 1)
    ident = G.identity
    for a in G:
        assert G.mul(a, ident) == a
        assert G.mul(a, G.inv(a)) == ident
        for b in list(G)[: min(G.order, 6)]:
            assert G.mul(a, b) == G.mul(b, a)


@pytest.mark.parametrize(
    "p,e,m",
    [
        (2, 1, "t^3+t+1"),
        (3, 1, "t^3+2*t"),
        (5, 1, "t^2+2"),
        (5, 1, "t^3+t^2"),
        (2, 2, "t^3+g^2*t^2"),
    ],
)
def test_invariant_structure(p, e, m):
    G = make_group(p, e, m)
    basis, orders = G.invariant_basis, G.invariant_orders
    # invariant factor chain d_1 | d_2 | ... multiplying to |G|
    prod = 1
    for a, b in zip(orders, orders[1:]):
        assert b % a == 0
    for d in orders:
        prod *= d
    assert prod == G.order
    # claimed orders are the true element orders
    for h, d in zip(basis, orders):
        assert G.element_order(h) == d
    # dlog is a bijection onto the box of exponent vectors
    seen = set()
    for g in G:
        vec = G.dlog(g)
        assert all(0 <= x < d for x, d in zip(vec, orders))
        # reconstruct g from its exponent vector
        acc = G.identity
        for h, x in zip(basis, vec):
            for _ in range(x):
                acc = G.mul(acc, h)
        assert acc == g
        seen.add(vec)
    assert len(seen) == G.order


def test_structure_regression_c6():
    # a cyclic group of order 6 whose relation lattice needs a genuine basis
    # change: the single invariant-factor generator must have order 6
    G = make_group(5, 1, "t^2+2")
    assert G.invariant_orders == [6]
    assert G.element_order(G.invariant_basis[0]) == 6


def test_dlog_is_homomorphism():
    G = make_group(3, 1, "t^3+2*t")
    orders = G.invariant_orders
    for a in G:
        for b in G:
            va, vb, vab = G.dlog(a), G.dlog(b), G.dlog(G.mul(a, b))
            assert vab == tuple((x + y) % d for x, y, d in zip(va, vb, orders))


def test_artin_symbol_multiplicative():
    # the symbol extends multiplicatively: the class of a product of primes
    # is the product of the Frobenius classes
    G = make_group(3, 1, "t^2+1")
    ctx = context(3, 1)
    for s, t_ in [("t", "t+1"), ("t+2", "t^2+t+2"), ("t+1", "t+1")]:
        a, b = parse_poly(ctx, s), parse_poly(ctx, t_)
        assert G.class_of(a * b) == G.mul(G.artin_symbol(a), G.artin_symbol(b))


def test_primary_decomposition_spans():
    G = make_group(2, 2, "t^3+g^2*t^2")  # C2 x C6
    parts = G.primary_decomposition()
    total = 1
    for g, pk in parts:
        assert G.element_order(g) == pk
        # prime power
        factors = {f for f in range(2, pk + 1) if pk % f == 0 and all(f % d for d in range(2, f))}
        assert len(factors) == 1
        total *= pk
    assert total == G.order
