import random
from fractions import Fraction

import pytest

from rayclass.ffield import context
from rayclass.fqpoly import PolyFq
from rayclass.matrices import (
    ZZ,
    PolyRing,
    det_int,
    hnf,
    int_inverse,
    matmul_fq,
    nullspace_fq,
    rref_fq,
    smith_normal_form,
    snf,
    snf_diagonal,
    solve_fq,
)


def random_int_matrix(rng, rows, cols, bound=9):
    return [[rng.randrange(-bound, bound + 1) for _ in range(cols)] for _ in range(rows)]


def test_snf_transforms_and_divisibility():
    rng = random.Random(11)
    for _ in range(40):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        A = random_int_matrix(rng, m, n)
        D, U, V = snf(A)
        # U*A*V == D exactly
        UA = [[sum(U[i][k] * A[k][j] for k in range(m)) for j in range(n)] for i in range(m)]
        UAV = [[sum(UA[i][k] * V[k][j] for k in range(n)) for j in range(n)] for i in range(m)]
        assert UAV == D
        assert abs(det_int(U)) == 1
        assert abs(det_int(V)) == 1
        diag = [D[i][i] for i in range(min(m, n))]
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0


def test_int_inverse_round_trip():
    rng = random.Random(12)
    for _ in range(20):
        n = rng.randrange(1, 5)
        A = random_int_matrix(rng, n, n)
        _, U, _ = snf(A)  # U is unimodular
        W = int_inverse(U)
        prod = [[sum(U[i][k] * W[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


def test_int_inverse_rejects_singular():
    with pytest.raises(ArithmeticError):
        int_inverse([[2, 0], [0, 1]])


def test_hnf_integer_lattice():
    rows = [[2, 4], [1, 1]]
    H = hnf(rows, ZZ)
    # lattice index preserved: |det| = 2
    assert abs(det_int(H)) == 2


def test_hnf_poly_ring():
    K = context(3)
    R = PolyRing(K)
    t = PolyFq.x(K)
    one = PolyFq.one(K)
    # the second row generates the first: the lattice has rank 1
    rows = [[t * t, t], [t, one]]
    H = hnf(rows, R)
    assert len(H) == 1 and H[0] == [t, one]
    # a rank-2 example: echelon with monic pivots, reduced above the pivot
    H2 = hnf([[t * t, one], [t, t]], R)
    assert len(H2) == 2
    assert H2[1][0].is_zero()
    for i in range(2):
        assert H2[i][i].is_monic()
    assert H2[0][1].degree < H2[1][1].degree


def test_rref_nullspace_solve():
    K = context(5)
    rng = random.Random(13)
    for _ in range(30):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        A = [[rng.randrange(5) for _ in range(n)] for _ in range(m)]
        for v in nullspace_fq(A, K):
            assert any(v)
            prod = matmul_fq(A, [[x] for x in v], K)
            assert all(row[0] == 0 for row in prod)
        x = [rng.randrange(5) for _ in range(n)]
        rhs = [row[0] for row in matmul_fq(A, [[xi] for xi in x], K)]
        sol = solve_fq(A, rhs, K)
        assert sol is not None
        back = [row[0] for row in matmul_fq(A, [[s] for s in sol], K)]
        assert back == rhs


def test_solve_detects_inconsistency():
    K = context(3)
    assert solve_fq([[1, 0], [1, 0]], [1, 2], K) is None


def test_snf_diagonal_poly_ring():
    K = context(2)
    R = PolyRing(K)
    t = PolyFq.x(K)
    one = PolyFq.one(K)
    diag = snf_diagonal([[t, PolyFq.zero(K)], [PolyFq.zero(K), t * t]], R)
    assert diag[0].is_monic() and (diag[1] % diag[0]).is_zero()


def test_rref_is_reduced():
    K = context(2)
    A = [[1, 1, 0], [1, 0, 1]]
    R, pivots = rref_fq([row[:] for row in A], K)
    for r, c in enumerate(pivots):
        assert R[r][c] == 1
        for r2 in range(len(R)):
            if r2 != r:
                assert R[r2][c] == 0
