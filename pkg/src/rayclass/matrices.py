"""Exact matrix normal forms over Euclidean domains, plus F_q linear algebra.

Matrices are plain lists of rows.  The Hermite and Smith routines are generic over
a tiny ring adapter so the same code serves the integers (class group indices,
abelian group structure) and F_q[t] (ideal lattices, module indices).
"""

from __future__ import annotations

from typing import Any, Sequence

from .ffield import FqCtx
from .fqpoly import PolyFq

IntMatrix = list[list[int]]


class ZZ:
    """Euclidean adapter for the rational integers."""

    zero = 0
    one = 1

    @staticmethod
    def is_zero(a: int) -> bool:
        return a == 0

    @staticmethod
    def add(a: int, b: int) -> int:
        return a + b

    @staticmethod
    def neg(a: int) -> int:
        return -a

    @staticmethod
    def mul(a: int, b: int) -> int:
        return a * b

    @staticmethod
    def divmod(a: int, b: int) -> tuple[int, int]:
        q, r = divmod(a, b)
        return q, r

    @staticmethod
    def size(a: int) -> int:
        return abs(a)

    @staticmethod
    def unit_to_canonical(a: int) -> int:
        """The unit u with u*a canonical (positive for Z, monic for F_q[t])."""
        return -1 if a < 0 else 1

    @staticmethod
    def is_unit(a: int) -> bool:
        return a in (1, -1)


class PolyRing:
    """Euclidean adapter for F_q[t]."""

    def __init__(self, ctx: FqCtx):
        self.ctx = ctx
        self.zero = PolyFq.zero(ctx)
        self.one = PolyFq.one(ctx)

    @staticmethod
    def is_zero(a: PolyFq) -> bool:
        return a.is_zero()

    @staticmethod
    def add(a: PolyFq, b: PolyFq) -> PolyFq:
        return a + b

    @staticmethod
    def neg(a: PolyFq) -> PolyFq:
        return -a

    @staticmethod
    def mul(a: PolyFq, b: PolyFq) -> PolyFq:
        return a * b

    @staticmethod
    def divmod(a: PolyFq, b: PolyFq) -> tuple[PolyFq, PolyFq]:
        return divmod(a, b)

    @staticmethod
    def size(a: PolyFq) -> int:
        return a.degree + 1

    def unit_to_canonical(self, a: PolyFq) -> PolyFq:
        return PolyFq.const(self.ctx, self.ctx.inv(a.lead()))

    @staticmethod
    def is_unit(a: PolyFq) -> bool:
        return a.degree == 0


def _xgcd(ring, a, b):
    """(g, s, t) with g = s*a + t*b, g the canonical associate of the gcd."""
    s0, s1 = ring.one, ring.zero
    t0, t1 = ring.zero, ring.one
    while not ring.is_zero(b):
        q, r = ring.divmod(a, b)
        a, b = b, r
        s0, s1 = s1, ring.add(s0, ring.neg(ring.mul(q, s1)))
        t0, t1 = t1, ring.add(t0, ring.neg(ring.mul(q, t1)))
    u = ring.unit_to_canonical(a)
    return ring.mul(u, a), ring.mul(u, s0), ring.mul(u, t0)


def hnf(rows: Sequence[Sequence[Any]], ring) -> list[list[Any]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows of the canonical echelon basis: pivots are canonical
    (positive / monic), entries above a pivot are reduced modulo it.  Zero rows
    are dropped, so the result has one row per pivot column.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    m = [list(r) for r in rows if any(not ring.is_zero(x) for x in r)]
    out: list[list[Any]] = []
    for col in range(ncols):
        pivot_row = next(
            (i for i in range(len(m)) if not ring.is_zero(m[i][col])), None
        )
        if pivot_row is None:
            continue
        m[0], m[pivot_row] = m[pivot_row], m[0]
        for i in range(1, len(m)):
            if ring.is_zero(m[i][col]):
                continue
            a, b = m[0][col], m[i][col]
            g, s, t = _xgcd(ring, a, b)
            qa, _ = ring.divmod(a, g)
            qb, _ = ring.divmod(b, g)
            r1, r2 = m[0], m[i]
            m[0] = [ring.add(ring.mul(s, x), ring.mul(t, y)) for x, y in zip(r1, r2)]
            m[i] = [
                ring.add(ring.mul(qa, y), ring.neg(ring.mul(qb, x)))
                for x, y in zip(r1, r2)
            ]
        u = ring.unit_to_canonical(m[0][col])
        if not ring.is_zero(ring.add(u, ring.neg(ring.one))):
            m[0] = [ring.mul(u, x) for x in m[0]]
        piv = m[0][col]
        for r in out:
            if not ring.is_zero(r[col]):
                q, _ = ring.divmod(r[col], piv)
                if not ring.is_zero(q):
                    for j in range(ncols):
                        r[j] = ring.add(r[j], ring.neg(ring.mul(q, m[0][j])))
        out.append(m.pop(0))
        m = [r for r in m if any(not ring.is_zero(x) for x in r)]
    return out


def smith_normal_form(
    mat: Sequence[Sequence[Any]], ring
) -> tuple[list[list[Any]], list[list[Any]], list[list[Any]]]:
    """(D, U, V) with U*mat*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    a = [list(r) for r in mat]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    U = [[ring.one if i == j else ring.zero for j in range(nr)] for i in range(nr)]
    V = [[ring.one if i == j else ring.zero for j in range(nc)] for i in range(nc)]

    def row_op(i, j, s, t, qa, qb):
        # (row_i, row_j) <- (s*row_i + t*row_j, -qb*row_i + qa*row_j)
        for M in (a, U):
            ri, rj = M[i], M[j]
            new_i = [ring.add(ring.mul(s, x), ring.mul(t, y)) for x, y in zip(ri, rj)]
            new_j = [
                ring.add(ring.neg(ring.mul(qb, x)), ring.mul(qa, y))
                for x, y in zip(ri, rj)
            ]
            M[i], M[j] = new_i, new_j

    def col_op(i, j, s, t, qa, qb):
        for M in (a, V):
            for r in M:
                x, y = r[i], r[j]
                r[i] = ring.add(ring.mul(s, x), ring.mul(t, y))
                r[j] = ring.add(ring.neg(ring.mul(qb, x)), ring.mul(qa, y))

    def scale_row(i, u):
        for M in (a, U):
            M[i] = [ring.mul(u, x) for x in M[i]]

    def eliminate(k: int) -> bool:
        """One sweep clearing row k and column k against the pivot; True if the
        sweep changed anything."""
        dirty = False
        for i in range(k + 1, nr):
            if not ring.is_zero(a[i][k]):
                q, r = ring.divmod(a[i][k], a[k][k])
                if ring.is_zero(r):
                    # exact multiple: plain subtraction keeps the pivot intact
                    nq = ring.neg(q)
                    for M in (a, U):
                        M[i] = [ring.add(y, ring.mul(nq, x)) for x, y in zip(M[k], M[i])]
                else:
                    g, s, t = _xgcd(ring, a[k][k], a[i][k])
                    qa, _ = ring.divmod(a[k][k], g)
                    qb, _ = ring.divmod(a[i][k], g)
                    row_op(k, i, s, t, qa, qb)
                dirty = True
        for j in range(k + 1, nc):
            if not ring.is_zero(a[k][j]):
                q, r = ring.divmod(a[k][j], a[k][k])
                if ring.is_zero(r):
                    nq = ring.neg(q)
                    for M in (a, V):
                        for row in M:
                            row[j] = ring.add(row[j], ring.mul(nq, row[k]))
                else:
                    g, s, t = _xgcd(ring, a[k][k], a[k][j])
                    qa, _ = ring.divmod(a[k][k], g)
                    qb, _ = ring.divmod(a[k][j], g)
                    col_op(k, j, s, t, qa, qb)
                dirty = True
        return dirty

    n = min(nr, nc)
    for k in range(n):
        # bring a smallest nonzero entry of the trailing block to the pivot
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if not ring.is_zero(a[i][j]):
                    if best is None or ring.size(a[i][j]) < ring.size(a[best[0]][best[1]]):
                        best = (i, j)
        if best is None:
            break
        i0, j0 = best
        if i0 != k:
            a[k], a[i0] = a[i0], a[k]
            U[k], U[i0] = U[i0], U[k]
        if j0 != k:
            for r in a:
                r[k], r[j0] = r[j0], r[k]
            for r in V:
                r[k], r[j0] = r[j0], r[k]
        while True:
            while eliminate(k):
                pass
            # divisibility fix-up: the pivot must divide the trailing block
            offender = None
            for i in range(k + 1, nr):
                for j in range(k + 1, nc):
                    if not ring.is_zero(a[i][j]):
                        _, r = ring.divmod(a[i][j], a[k][k])
                        if not ring.is_zero(r):
                            offender = i
                            break
                if offender is not None:
                    break
            if offender is None:
                break
            for M in (a, U):
                M[k] = [ring.add(x, y) for x, y in zip(M[k], M[offender])]
        u = ring.unit_to_canonical(a[k][k])
        if not ring.is_zero(ring.add(u, ring.neg(ring.one))):
            scale_row(k, u)
    return a, U, V


def snf_diagonal(mat: Sequence[Sequence[Any]], ring) -> list[Any]:
    d, _, _ = smith_normal_form(mat, ring)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def snf(mat: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Integer Smith normal form (D, U, V) with U*mat*V = D."""
    return smith_normal_form(mat, ZZ)


def int_inverse(V: IntMatrix) -> list[list[int]]:
    """Inverse of a unimodular integer matrix (exact, via fractions)."""
    from fractions import Fraction

    n = len(V)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col])
        a[col], a[piv] = a[piv], a[col]
        s = a[col][col]
        a[col] = [x / s for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            if a[i][j].denominator != 1:
                raise ArithmeticError("matrix is not unimodular")
            row.append(int(a[i][j]))
        out.append(row)
    return out


def det_int(mat: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(r) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# F_q linear algebra
# ---------------------------------------------------------------------------


def rref_fq(rows: list[list[int]], K: FqCtx) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_q; returns (matrix, pivot column list)."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        sel = next((i for i in range(r, nr) if m[i][c]), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = K.inv(m[r][c])
        m[r] = [K.mul(inv, x) for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m[:r], pivots


def nullspace_fq(rows: list[list[int]], K: FqCtx) -> list[list[int]]:
    """Basis of the right kernel {v : rows @ v = 0} over F_q."""
    if not rows:
        return []
    nc = len(rows[0])
    red, pivots = rref_fq(rows, K)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * nc
        v[fc] = 1
        for r, pc in zip(red, pivots):
            v[pc] = K.neg(r[fc])
        basis.append(v)
    return basis


def solve_fq(rows: list[list[int]], rhs: list[int], K: FqCtx) -> list[int] | None:
    """One solution of rows @ x = rhs over F_q, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    nc = len(rows[0]) if rows else 0
    red, pivots = rref_fq(aug, K)
    x = [0] * nc
    for r, pc in zip(red, pivots):
        if pc == nc:
            return None
        x[pc] = r[nc]
    return x


def matmul_fq(A: list[list[int]], B: list[list[int]], K: FqCtx) -> list[list[int]]:
    nr, nm = len(A), len(B)
    nc = len(B[0]) if nm else 0
    out = [[0] * nc for _ in range(nr)]
    for i in range(nr):
        Ai = A[i]
        Oi = out[i]
        for k in range(nm):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(nc):
                    if Bk[j]:
                        Oi[j] = K.add(Oi[j], K.mul(a, Bk[j]))
    return out
