"""The cyclotomic function field K_m and its real subfield H_m.

K_m = k[x]/(Phi_m) carries the torsion generator lambda; H_m = k(beta) with
beta = -lambda^(q-1) is the narrow ray class field of modulus m, in which the
infinite place splits completely.  Galois group G = (F_q[t]/m)^x / F_q^x.

A key structural fact drives the representation: an element of K_m lies in
H_m exactly when its lambda-power coordinates are supported on exponents
divisible by q-1, and beta^j = (-1)^j lambda^(j(q-1)) holds verbatim (no
reduction, since j(q-1) < deg Phi_m for j < [H_m:k]).  The basis change
between the lambda-basis of K_m and the beta-power basis of H_m is therefore
a signed re-indexing, and all Galois data of H_m has polynomial coefficients.
"""

from __future__ import annotations

from .carlitz import carlitz_action, carlitz_rho, torsion_poly
from .ffield import FqCtx
from .fqpoly import PolyFq
from .galois import GaloisGroup
from .infinity import (
    InfinityEmbedding,
    MAX_PRECISION,
    MIN_PRECISION,
    beta_conjugates,
)
from .laurent import PrecisionError
from .ratfun import RatFun
from .ypoly import YPoly

HElem = tuple  # tuple[RatFun, ...] on the beta-power basis


class CycField:
    """K_m as the ring F_q[t][x]/(Phi_m); all operations used here are ring
    operations, so irreducibility of Phi_m (a theorem) is never needed for
    correctness of the exact arithmetic."""

    def __init__(self, m: PolyFq):
        m = m.monic()
        self.ctx: FqCtx = m.ctx
        self.modulus: PolyFq = m
        self.G = GaloisGroup(m)
        self.phi: YPoly = torsion_poly(m)
        self.n: int = self.phi.degree
        self._sigma_lambda: dict[int, YPoly] = {}
        self._beta: YPoly | None = None

    def sigma_lambda(self, i: int) -> YPoly:
        """sigma_{a_i}(lambda) = rho_{a_i}(lambda) mod Phi_m."""
        if i not in self._sigma_lambda:
            self._sigma_lambda[i] = carlitz_action(self.G.rep(i), YPoly.y(self.ctx), self.phi)
        return self._sigma_lambda[i]

    def beta(self) -> YPoly:
        if self._beta is None:
            q = self.ctx.q
            self._beta = -(YPoly.y(self.ctx).pow_mod(q - 1, self.phi))
        return self._beta

    def sigma_beta(self, i: int) -> YPoly:
        return -(self.sigma_lambda(i).pow_mod(self.ctx.q - 1, self.phi))

    def to_beta_coords(self, w: YPoly) -> tuple[PolyFq, ...]:
        """Coordinates on the beta-power basis of H_m; error if w is not
        fixed by Gal(K_m/H_m)."""
        q = self.ctx.q
        order = self.G.order
        neg1 = self.ctx.neg(1)
        out = [PolyFq.zero(self.ctx)] * order
        for j in range(w.degree + 1):
            c = w.coeff(j)
            if c.is_zero():
                continue
            if j % (q - 1):
                raise ValueError("element does not lie in the real subfield")
            i = j // (q - 1)
            out[i] = c if i % 2 == 0 else c.scale(neg1)
        return tuple(out)

    def from_beta_coords(self, coords) -> YPoly:
        q = self.ctx.q
        neg1 = self.ctx.neg(1)
        out = [PolyFq.zero(self.ctx)] * ((len(coords) - 1) * (q - 1) + 1 if coords else 1)
        for i, c in enumerate(coords):
            if not c.is_zero():
                out[i * (q - 1)] = c if i % 2 == 0 else c.scale(neg1)
        return YPoly(self.ctx, out)


def _pshift(ctx: FqCtx, coeffs: list[RatFun]) -> list[RatFun]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _pmul(ctx: FqCtx, a: list[RatFun], b: list[RatFun]) -> list[RatFun]:
    if not a or not b:
        return []
    out = [RatFun.zero(ctx) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if not ai.is_zero():
            for j, bj in enumerate(b):
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
    return _pshift(ctx, out)


def _pdivmod(ctx: FqCtx, a: list[RatFun], b: list[RatFun]) -> tuple[list[RatFun], list[RatFun]]:
    if not b:
        raise ZeroDivisionError
    rem = list(a)
    db = len(b) - 1
    inv = b[-1].inv()
    quot = [RatFun.zero(ctx)] * max(0, len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not c.is_zero():
            c = c * inv
            quot[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] = rem[i - db + j] - c * b[j]
    return _pshift(ctx, quot), _pshift(ctx, rem[:db])


def _pxgcd(ctx: FqCtx, a: list[RatFun], b: list[RatFun]):
    r0, r1 = list(a), list(b)
    s0, s1 = [RatFun.one(ctx)], []
    while r1:
        q, r = _pdivmod(ctx, r0, r1)
        r0, r1 = r1, r
        qs = _pmul(ctx, q, s1)
        news = [
            (s0[i] if i < len(s0) else RatFun.zero(ctx))
            - (qs[i] if i < len(qs) else RatFun.zero(ctx))
            for i in range(max(len(s0), len(qs)))
        ]
        s0, s1 = s1, _pshift(ctx, news)
    return r0, s0


class RealCycField:
    """H_m = k[y]/(B) where B is the minimal polynomial of beta.

    B is produced as the product of the series conjugates of beta and then
    certified exactly: the series roots are pairwise distinct and B(beta) = 0
    holds in K_m, which together prove B is the (irreducible) minimal
    polynomial and H_m = k[y]/(B) is a field of degree |G|.
    """

    def __init__(self, K: CycField):
        self.K = K
        self.ctx: FqCtx = K.ctx
        self.modulus: PolyFq = K.modulus
        self.G: GaloisGroup = K.G
        self.degree: int = self.G.order
        # galois_table[i] = beta-power coordinates of sigma_i(beta), in F_q[t]
        self.galois_table: list[tuple[PolyFq, ...]] = [
            K.to_beta_coords(K.sigma_beta(i)) for i in range(self.degree)
        ]
        self.beta_minpoly: YPoly = self._build_minpoly()
        self._sigma_matrix: dict[int, list[tuple[PolyFq, ...]]] = {}
        self._embedding: InfinityEmbedding | None = None

    # -- construction ---------------------------------------------------------

    def _build_minpoly(self) -> YPoly:
        ctx = self.ctx
        prec = MIN_PRECISION
        while prec <= MAX_PRECISION:
            try:
                roots = beta_conjugates(self.G, prec)
                # product of (y - root) with series coefficients
                coeffs = [roots[0].scale(ctx.neg(1))]
                for r in roots[1:]:
                    neg = r.scale(ctx.neg(1))
                    # coeffs are the non-leading coefficients of a monic poly in y;
                    # multiply by (y + neg): new_j = coeffs_j * neg + coeffs_{j-1},
                    # with the implicit leading 1 contributing neg at the top
                    out = []
                    for j in range(len(coeffs) + 1):
                        term = coeffs[j] * neg if j < len(coeffs) else neg
                        if j > 0:
                            term = term + coeffs[j - 1]
                        out.append(term)
                    coeffs = out
                B = [self._series_to_poly(c) for c in coeffs] + [PolyFq.one(ctx)]
                cand = YPoly(ctx, B)
            except PrecisionError:
                prec *= 2
                continue
            # exact certificate: B(beta) = 0 in K_m
            acc = YPoly.zero(ctx)
            beta = self.K.beta()
            for c in reversed(cand.coeffs):
                acc = acc.mul_mod(beta, self.K.phi) + YPoly.const(c)
            if (acc % self.K.phi).is_zero():
                return cand
            prec *= 2
        raise PrecisionError("minimal polynomial of beta not certified at maximum precision")

    def _series_to_poly(self, s) -> PolyFq:
        """Recognize a series with no positive 1/t-exponents as an element of
        F_q[t]; exponent -d carries the coefficient of t^d."""
        ctx = self.ctx
        if s.is_zero_window():
            return PolyFq.zero(ctx)
        if s.prec < 1:
            raise PrecisionError("window does not cover the constant term")
        v = s.valuation()
        if v > 0:
            return PolyFq.zero(ctx)
        for e in range(1, s.prec):
            if s.coeff(e):
                raise PrecisionError("series has positive 1/t-exponents; not a polynomial")
        return PolyFq(ctx, [s.coeff(-d) for d in range(0, -v + 1)])

    # -- element arithmetic on the beta-power basis ----------------------------

    def zero(self) -> HElem:
        return ()

    def one(self) -> HElem:
        return (RatFun.one(self.ctx),)

    def from_ratfun(self, r: RatFun) -> HElem:
        return () if r.is_zero() else (r,)

    def from_poly(self, p: PolyFq) -> HElem:
        return self.from_ratfun(RatFun.from_poly(p))

    def beta_elem(self) -> HElem:
        return (RatFun.zero(self.ctx), RatFun.one(self.ctx))

    def from_poly_coords(self, coords) -> HElem:
        return tuple(RatFun.from_poly(c) for c in coords)

    def from_ypoly(self, w: YPoly) -> HElem:
        return self.from_poly_coords(self.K.to_beta_coords(w))

    def _b_ratfun(self) -> list[RatFun]:
        return [RatFun.from_poly(c) for c in self.beta_minpoly.coeffs]

    def is_zero_elem(self, a: HElem) -> bool:
        return all(c.is_zero() for c in a)

    def eq(self, a: HElem, b: HElem) -> bool:
        return self.is_zero_elem(self.sub(a, b))

    def add(self, a: HElem, b: HElem) -> HElem:
        n = max(len(a), len(b))
        z = RatFun.zero(self.ctx)
        out = [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)]
        return tuple(_pshift(self.ctx, out))

    def neg(self, a: HElem) -> HElem:
        return tuple(-c for c in a)

    def sub(self, a: HElem, b: HElem) -> HElem:
        return self.add(a, self.neg(b))

    def mul(self, a: HElem, b: HElem) -> HElem:
        prod = _pmul(self.ctx, list(a), list(b))
        if len(prod) >= self.degree + 1:
            _, prod = _pdivmod(self.ctx, prod, self._b_ratfun())
        return tuple(prod)

    def scale(self, a: HElem, r: RatFun) -> HElem:
        if r.is_zero():
            return ()
        return tuple(c * r for c in a)

    def inv(self, a: HElem) -> HElem:
        if self.is_zero_elem(a):
            raise ZeroDivisionError("inverse of zero in H_m")
        g, s = _pxgcd(self.ctx, list(a), self._b_ratfun())
        if len(g) != 1:
            raise ArithmeticError("element not invertible: minimal polynomial not coprime")
        ginv = g[0].inv()
        red = _pdivmod(self.ctx, _pshift(self.ctx, [c * ginv for c in s]), self._b_ratfun())[1]
        return tuple(red)

    def pow(self, a: HElem, n: int) -> HElem:
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = self.one(), a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    # -- Galois action ----------------------------------------------------------

    def sigma_matrix(self, i: int) -> list[tuple[PolyFq, ...]]:
        """Columns j = beta-coordinates of sigma_i(beta^j), all in F_q[t]."""
        if i not in self._sigma_matrix:
            cols = [tuple([PolyFq.one(self.ctx)] + [PolyFq.zero(self.ctx)] * (self.degree - 1))]
            g = self.galois_table[i]
            cur: HElem = self.from_poly_coords(g)
            gel = cur
            for _ in range(1, self.degree):
                cols.append(tuple(c.as_poly() for c in cur) + (PolyFq.zero(self.ctx),) * (self.degree - len(cur)))
                cur = self.mul(cur, gel)
            self._sigma_matrix[i] = cols
        return self._sigma_matrix[i]

    def apply_sigma(self, i: int, a: HElem) -> HElem:
        cols = self.sigma_matrix(i)
        out = [RatFun.zero(self.ctx)] * self.degree
        for j, c in enumerate(a):
            if c.is_zero():
                continue
            col = cols[j]
            for r in range(self.degree):
                if not col[r].is_zero():
                    out[r] = out[r] + c * RatFun.from_poly(col[r])
        return tuple(_pshift(self.ctx, out))

    # -- infinity -----------------------------------------------------------------

    def embedding(self, min_precision: int = MIN_PRECISION) -> InfinityEmbedding:
        if self._embedding is None or self._embedding.precision < min_precision:
            prec = MIN_PRECISION
            while prec < min_precision:
                prec *= 2
            while True:
                try:
                    self._embedding = InfinityEmbedding(self, prec)
                    break
                except PrecisionError:
                    prec *= 2
                    if prec > MAX_PRECISION:
                        raise
        return self._embedding


def build_cyc_field(m: PolyFq) -> CycField:
    return CycField(m)


def build_real_field(K: CycField | PolyFq) -> RealCycField:
    if isinstance(K, PolyFq):
        K = CycField(K)
    return RealCycField(K)
