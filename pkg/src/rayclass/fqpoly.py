"""Dense univariate polynomials over a small finite field.

A :class:`PolyFq` is an immutable little-endian coefficient tuple plus its
:class:`~rayclass.ffield.FqCtx`.  The zero polynomial is the empty tuple and has
degree -1.  Everything downstream (series, orders, lattices) builds on this type,
so the operation set is deliberately broad: Euclidean division, xgcd, modular
powering, squarefree/irreducible factorization, root finding, and the canonical
text format ``c_d*t^d + ... + c_0``.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator

from .ffield import FqCtx


class PolyFq:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqCtx, coeffs: Iterable[int]):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(ctx: FqCtx) -> "PolyFq":
        return PolyFq(ctx, ())

    @staticmethod
    def one(ctx: FqCtx) -> "PolyFq":
        return PolyFq(ctx, (1,))

    @staticmethod
    def const(ctx: FqCtx, c: int) -> "PolyFq":
        return PolyFq(ctx, (c,))

    @staticmethod
    def x(ctx: FqCtx) -> "PolyFq":
        return PolyFq(ctx, (0, 1))

    @staticmethod
    def monomial(ctx: FqCtx, c: int, n: int) -> "PolyFq":
        return PolyFq(ctx, (0,) * n + (c,))

    # -- basics ----------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lead(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyFq)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other: "PolyFq") -> "PolyFq":
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return PolyFq(K, out)

    def __neg__(self) -> "PolyFq":
        K = self.ctx
        return PolyFq(K, (K.neg(c) for c in self.coeffs))

    def __sub__(self, other: "PolyFq") -> "PolyFq":
        return self + (-other)

    def __mul__(self, other: "PolyFq") -> "PolyFq":
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyFq(K, ())
        out = [0] * (len(a) + len(b) - 1)
        add, mul = K.add, K.mul
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return PolyFq(K, out)

    def scale(self, c: int) -> "PolyFq":
        K = self.ctx
        if c == 0:
            return PolyFq(K, ())
        return PolyFq(K, (K.mul(c, a) for a in self.coeffs))

    def shift(self, n: int) -> "PolyFq":
        """Multiply by x^n (n >= 0)."""
        if self.is_zero():
            return self
        return PolyFq(self.ctx, (0,) * n + self.coeffs)

    def __divmod__(self, other: "PolyFq") -> tuple["PolyFq", "PolyFq"]:
        K = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        inv_lead = K.inv(other.lead())
        rem = list(self.coeffs)
        quot = [0] * max(0, len(rem) - db)
        b = other.coeffs
        sub, mul = K.sub, K.mul
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                c = mul(c, inv_lead)
                quot[i - db] = c
                for j in range(db + 1):
                    rem[i - db + j] = sub(rem[i - db + j], mul(c, b[j]))
        return PolyFq(K, quot), PolyFq(K, rem)

    def __floordiv__(self, other: "PolyFq") -> "PolyFq":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyFq") -> "PolyFq":
        return divmod(self, other)[1]

    def exact_div(self, other: "PolyFq") -> "PolyFq":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def monic(self) -> "PolyFq":
        if self.is_zero() or self.is_monic():
            return self
        return self.scale(self.ctx.inv(self.lead()))

    def pow(self, n: int) -> "PolyFq":
        result = PolyFq.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def pow_mod(self, n: int, mod: "PolyFq") -> "PolyFq":
        result = PolyFq.one(self.ctx) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def derivative(self) -> "PolyFq":
        K = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            # i * c_i computed in the prime field scalar action
            out.append(K.mul(i % K.p, self.coeffs[i]))
        return PolyFq(K, out)

    def evaluate(self, x: int, ctx: FqCtx | None = None) -> int:
        """Horner evaluation; pass ``ctx`` with an embedding-compatible encoding
        to evaluate in an extension (coefficients must already live there)."""
        K = ctx or self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def map_coeffs(self, table: list[int], ctx: FqCtx) -> "PolyFq":
        """Apply a coefficient-wise map (e.g. a subfield embedding table)."""
        return PolyFq(ctx, (table[c] for c in self.coeffs))

    def frobenius(self, j: int = 1) -> "PolyFq":
        """Apply c -> c^(p^j) to the coefficients."""
        K = self.ctx
        out = list(self.coeffs)
        for _ in range(j):
            out = [K.frob(c) for c in out]
        return PolyFq(K, out)

    # -- gcds -------------------------------------------------------------------

    def gcd(self, other: "PolyFq") -> "PolyFq":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, other: "PolyFq") -> tuple["PolyFq", "PolyFq", "PolyFq"]:
        """(g, s, t) with g = s*self + t*other and g monic (or zero)."""
        K = self.ctx
        a, b = self, other
        sa, sb = PolyFq.one(K), PolyFq.zero(K)
        ta, tb = PolyFq.zero(K), PolyFq.one(K)
        while not b.is_zero():
            q, r = divmod(a, b)
            a, b = b, r
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a.is_zero():
            return a, sa, ta
        c = K.inv(a.lead())
        return a.scale(c), sa.scale(c), ta.scale(c)

    # -- factorization ------------------------------------------------------------

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0 and not self.derivative().is_zero()

    def squarefree_decomposition(self) -> list[tuple["PolyFq", int]]:
        """Yun-style decomposition valid in characteristic p (handles p-th powers)."""
        K = self.ctx
        f = self.monic()
        out: list[tuple[PolyFq, int]] = []
        if f.degree <= 0:
            return out
        e_mult = 1
        while f.degree > 0:
            d = f.derivative()
            if d.is_zero():
                # f is a p-th power: take p-th root and recurse
                root = f._pth_root()
                for g, m in root.squarefree_decomposition() or [(root, 1)]:
                    out.append((g, m * K.p * e_mult))
                return _merge_factors(out)
            c = f.gcd(d)
            w = f.exact_div(c)
            i = 1
            while w.degree > 0:
                y = w.gcd(c)
                z = w.exact_div(y)
                if z.degree > 0:
                    out.append((z, i * e_mult))
                c = c.exact_div(y)
                w = y
                i += 1
            f = c
            e_mult *= K.p
            if f.degree > 0:
                f = f._pth_root()
        return _merge_factors(out)

    def _pth_root(self) -> "PolyFq":
        K = self.ctx
        p = K.p
        out = []
        for i in range(0, len(self.coeffs), p):
            c = self.coeffs[i]
            # c^(q/p) is the p-th root of c in F_q
            out.append(K.pow(c, K.q // p) if c else 0)
        for i, c in enumerate(self.coeffs):
            if i % p and c:
                raise ValueError("polynomial is not a p-th power")
        return PolyFq(K, out)

    def factor(self) -> list[tuple["PolyFq", int]]:
        """Monic irreducible factorization [(g_i, e_i)], deterministic order.

        Factors are sorted by (degree, coefficient tuple).  The leading unit is
        dropped; callers needing it use ``self.lead()``.
        """
        if self.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        out: list[tuple[PolyFq, int]] = []
        for g, m in self.monic().squarefree_decomposition():
            for h in _berlekamp(g):
                out.append((h, m))
        out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
        return out

    def is_irreducible(self) -> bool:
        if self.degree <= 0:
            return False
        if self.degree == 1:
            return True
        f = self.monic()
        if not f.is_squarefree():
            return False
        return len(_berlekamp(f)) == 1

    def roots(self) -> list[int]:
        """Distinct roots in F_q, ascending in the integer encoding."""
        K = self.ctx
        if self.is_zero():
            raise ValueError("zero polynomial")
        if K.q <= 256:
            return [x for x in range(K.q) if self.evaluate(x) == 0]
        x = PolyFq.x(K)
        g = self.gcd(x.pow_mod(K.q, self) - x)
        return sorted(r for r, _ in _linear_roots(g))

    # -- formatting ---------------------------------------------------------------

    def format(self, var: str = "t") -> str:
        K = self.ctx
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = K.fmt(c)
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append(f"{cs}*{var}")
            else:
                parts.append(f"{cs}*{var}^{i}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyFq({self.format()!r} over F_{self.ctx.q})"


def _merge_factors(out: list[tuple[PolyFq, int]]) -> list[tuple[PolyFq, int]]:
    merged: dict[PolyFq, int] = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))


def _linear_roots(g: PolyFq) -> list[tuple[int, int]]:
    out = []
    for h, m in g.factor():
        if h.degree == 1:
            out.append((g.ctx.neg(h.constant()), m))
    return out


def _berlekamp(f: PolyFq) -> list[PolyFq]:
    """Factor a monic squarefree polynomial into monic irreducibles (Berlekamp).

    Splitting uses exhaustive constants from F_q, which is deterministic and fast
    for the small fields used here.
    """
    K = f.ctx
    n = f.degree
    if n <= 1:
        return [f] if n == 1 else []
    x = PolyFq.x(K)
    xq = x.pow_mod(K.q, f)
    # rows of the Berlekamp matrix Q - I acting on coefficient vectors
    rows = []
    power = PolyFq.one(K)
    for i in range(n):
        row = [power[j] for j in range(n)]
        row[i] = K.sub(row[i], 1)
        rows.append(row)
        power = (power * xq) % f
    basis = _left_nullspace(rows, K)
    r = len(basis)
    if r == 1:
        return [f]
    # two distinct irreducible factors are separated by some (basis vector,
    # constant) pair, so one pass over the whole basis completes the split
    factors = [f]
    for vec in basis:
        if len(factors) >= r:
            break
        v = PolyFq(K, vec)
        if v.degree <= 0:
            continue
        nxt: list[PolyFq] = []
        for g in factors:
            pieces = [g]
            for c in range(K.q):
                vc = v - PolyFq.const(K, c)
                tmp: list[PolyFq] = []
                for piece in pieces:
                    if piece.degree <= 1:
                        tmp.append(piece)
                        continue
                    d = piece.gcd(vc % piece)
                    if 0 < d.degree < piece.degree:
                        tmp.append(d)
                        tmp.append(piece.exact_div(d))
                    else:
                        tmp.append(piece)
                pieces = tmp
            nxt.extend(pieces)
        factors = nxt
    if len(factors) != r:
        raise AssertionError("Berlekamp splitting incomplete")
    return [g.monic() for g in factors]


def _left_nullspace(rows: list[list[int]], K: FqCtx) -> list[list[int]]:
    """Basis of {v : v @ rows == 0} over F_q (rows is n x n)."""
    n = len(rows)
    # transpose so we solve M v^T = 0 by column reduction of rows^T
    m = [[rows[j][i] for j in range(n)] for i in range(n)]
    # Gaussian elimination, tracking pivots
    pivots: list[tuple[int, int]] = []
    row = 0
    where = [-1] * n
    for col in range(n):
        sel = next((r for r in range(row, n) if m[r][col]), None)
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        inv = K.inv(m[row][col])
        m[row] = [K.mul(inv, v) for v in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                c = m[r][col]
                m[r] = [K.sub(v, K.mul(c, w)) for v, w in zip(m[r], m[row])]
        where[col] = row
        row += 1
    basis = []
    for col in range(n):
        if where[col] != -1:
            continue
        vec = [0] * n
        vec[col] = 1
        for c2 in range(n):
            if where[c2] != -1:
                vec[c2] = K.neg(m[where[c2]][col])
        basis.append(vec)
    # put the all-ones (constants) direction first if present
    basis.sort(key=lambda v: (v[1:] != [0] * (n - 1), v))
    return basis


# ---------------------------------------------------------------------------
# parsing and enumeration
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(r"^(?:(?P<coef>[^*]+)\*)?(?P<var>[a-zA-Z]\w*)(?:\^(?P<exp>\d+))?$")


def parse_poly(ctx: FqCtx, text: str, var: str = "t") -> PolyFq:
    """Parse the canonical format ``c_d*t^d + ... + c_0`` (coefficient-first terms).

    Bare coefficients, bare ``t``/``t^k`` terms, and ``-`` separators are accepted;
    output of :meth:`PolyFq.format` round-trips exactly.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    text = text.replace("-", "+-") if ctx.p != 2 else text
    coeffs: dict[int, int] = {}
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            continue
        negate = term.startswith("-")
        if negate:
            term = term[1:].strip()
        try:
            exp, c = 0, ctx.parse(term)
        except ValueError:
            m = _TERM_RE.match(term)
            if not m:
                raise ValueError(f"cannot parse term {term!r}")
            if m.group("var") != var:
                raise ValueError(f"unexpected variable {m.group('var')!r} (want {var!r})")
            exp = int(m.group("exp") or 1)
            coefs = m.group("coef")
            c = ctx.parse(coefs) if coefs is not None else 1
        if negate:
            c = ctx.neg(c)
        coeffs[exp] = ctx.add(coeffs.get(exp, 0), c)
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for e, c in coeffs.items():
        out[e] = c
    return PolyFq(ctx, out)


def monic_polys(ctx: FqCtx, degree: int) -> Iterator[PolyFq]:
    """All monic polynomials of exact degree, in lexicographic coefficient order
    (constant coefficient varies fastest)."""
    for lower in itertools.product(range(ctx.q), repeat=degree):
        yield PolyFq(ctx, tuple(reversed(lower)) + (1,))


def monic_irreducibles(ctx: FqCtx, degree: int) -> Iterator[PolyFq]:
    for f in monic_polys(ctx, degree):
        if f.is_irreducible():
            yield f
