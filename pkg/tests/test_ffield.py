import pytest

from rayclass.ffield import ADD_TABLE_MAX, FqCtx, context, context_for_q


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 4)])
def test_field_axioms(p, e):
    K = context(p, e)
    q = p**e
    assert K.q == q
    elems = range(q)
    for a in elems:
        assert K.add(a, 0) == a
        assert K.mul(a, 1) == a
        assert K.add(a, K.neg(a)) == 0
        if a:
            assert K.mul(a, K.inv(a)) == 1
    # commutativity and distributivity on a sample
    for a in range(min(q, 8)):
        for b in range(min(q, 8)):
            assert K.add(a, b) == K.add(b, a)
            assert K.mul(a, b) == K.mul(b, a)
            for c in range(min(q, 5)):
                assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))


def test_frobenius_is_field_automorphism():
    K = context(3, 2)
    for a in range(K.q):
        assert K.frob(a) == K.pow(a, 3)
        for b in range(K.q):
            assert K.frob(K.add(a, b)) == K.add(K.frob(a), K.frob(b))
            assert K.frob(K.mul(a, b)) == K.mul(K.frob(a), K.frob(b))


def test_contexts_are_interned():
    assert context(3, 1) is context(3, 1)
    assert context_for_q(9) is context(3, 2)


def test_multiplicative_generator():
    for p, e in [(2, 3), (5, 1), (3, 2)]:
        K = context(p, e)
        g = K.generator
        seen = {1}
        x = g
        while x != 1:
            seen.add(x)
            x = K.mul(x, g)
        assert len(seen) == K.q - 1


def test_big_field_add_without_table():
    # beyond ADD_TABLE_MAX the dense addition table is skipped; addition
    # must still agree with digitwise arithmetic
    K = context(3, 8)
    assert K.q > ADD_TABLE_MAX
    assert K._add is None
    for a, b in [(0, 0), (1, 2), (100, 2000), (6560, 6560), (1234, 4321)]:
        da, db = K.to_digits(a), K.to_digits(b)
        expect = K.from_digits([(x + y) % 3 for x, y in zip(da, db)])
        assert K.add(a, b) == expect
    assert K.mul(K.generator, K.inv(K.generator)) == 1


def test_parse_format_round_trip():
    K = context(2, 2)
    for a in range(K.q):
        assert K.parse(K.fmt(a)) == a


def test_invalid_context_rejected():
    with pytest.raises(ValueError):
        FqCtx(4, 1)  # characteristic must be prime
    with pytest.raises(ValueError):
        FqCtx(2, 2, (1, 0, 1))  # x^2+1 is reducible over F_2
