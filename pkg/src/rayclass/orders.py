"""The maximal order of H_m over F_q[t]: integral closure, prime splitting,
fractional ideals, and valuations.

Everything is phrased over the order's own F_q[t]-basis: elements are
coordinate vectors of polynomials, lattices (fractional ideals) are Hermite
normal form matrices over F_q[t], and valuations at a finite place run
Cohen's multiplier loop with an exact divisibility test at each step.
"""

from __future__ import annotations

import functools

from .ffield import ADD_TABLE_MAX, FqCtx
from .fqpoly import PolyFq
from .matrices import PolyRing, hnf, nullspace_fq, solve_fq
from .ratfun import RatFun
from .cycfield import RealCycField, HElem
from .ypoly import YPoly

AVec = list[PolyFq]  # coordinate vector over F_q[t]


# ---------------------------------------------------------------------------
# exact polynomial-matrix helpers
# ---------------------------------------------------------------------------


def poly_det(rows: list[AVec], ctx: FqCtx) -> PolyFq:
    """Determinant over F_q[t] by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return PolyFq.one(ctx)
    a = [list(r) for r in rows]
    neg_one = ctx.neg(1)
    sign = 1
    prev = PolyFq.one(ctx)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return PolyFq.zero(ctx)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d.scale(neg_one) if sign < 0 else d


def solve_triangular_exact(C: list[AVec], v: AVec) -> AVec | None:
    """x with x*C = v over F_q[t], for C a full-rank HNF basis (row i pivots at
    column i); None when v is not in the row lattice."""
    n = len(C)
    x: AVec = []
    rem = list(v)
    for j in range(n):
        q, r = divmod(rem[j], C[j][j])
        if not r.is_zero():
            return None
        x.append(q)
        if not q.is_zero():
            row = C[j]
            for col in range(j + 1, n):
                rem[col] = rem[col] - q * row[col]
    return x


def solve_triangular_ratfun(C: list[AVec], v: list[RatFun]) -> list[RatFun]:
    """x with x*C = v over the fraction field k = F_q(t)."""
    n = len(C)
    x: list[RatFun] = []
    rem = list(v)
    for j in range(n):
        q = rem[j] * RatFun.from_poly(C[j][j]).inv()
        x.append(q)
        if not q.is_zero():
            row = C[j]
            for col in range(j + 1, n):
                rem[col] = rem[col] - q * RatFun.from_poly(row[col])
    return x


def _content(polys: list[PolyFq], ctx: FqCtx) -> PolyFq:
    g = PolyFq.zero(ctx)
    for p in polys:
        if not p.is_zero():
            g = p.monic() if g.is_zero() else g.gcd(p)
            if g.degree == 0:
                break
    return g if not g.is_zero() else PolyFq.one(ctx)


# ---------------------------------------------------------------------------
# residue field A/(p) as an explicit F_{q^d}
# ---------------------------------------------------------------------------


class ResidueFieldIso:
    """The isomorphism F_q[t]/(p) -> F_{q^d} (d = deg p) onto an extension
    context, with both directions explicit.  Linear algebra over the residue
    field then runs on plain integer field elements."""

    def __init__(self, ctx: FqCtx, p: PolyFq):
        self.ctx = ctx
        self.p = p.monic()
        self.d = p.degree
        big, emb = ctx.extension(self.d)
        self.big = big
        self.emb = emb
        if self.d == 1:
            self.root = big.neg(emb[p.monic().constant()])
        else:
            lifted = PolyFq(big, tuple(emb[c] for c in self.p.coeffs))
            roots = lifted.roots()
            if not roots:
                raise ArithmeticError("irreducible polynomial has no root in its splitting field")
            self.root = min(roots)
        # F_p-matrix of (c_0..c_{d-1}) in F_q^d  ->  digits of sum emb[c_i] root^i
        from .ffield import context as _context

        self.prime_ctx = _context(ctx.p, 1)
        self._inverse_rows: list[list[int]] | None = None

    def to_big(self, c: PolyFq) -> int:
        c = c % self.p
        acc = 0
        big, emb, r = self.big, self.emb, self.root
        for coeff in reversed(c.coeffs):
            acc = big.add(big.mul(acc, r), emb[coeff])
        return acc

    def _inverse_matrix(self) -> list[list[int]]:
        if self._inverse_rows is not None:
            return self._inverse_rows
        big, emb = self.big, self.emb
        e0 = self.ctx.e
        n = big.e  # = e0 * d
        cols = []
        rpow = 1
        for i in range(self.d):
            for j in range(e0):
                unit = self.ctx.p**j  # the basis element u^j of F_q
                cols.append(big.to_digits(big.mul(emb[unit], rpow)))
            rpow = big.mul(rpow, self.root)
        # invert the n x n digit matrix over F_p
        K = self.prime_ctx
        aug = [
            [cols[c][r] for c in range(n)] + [1 if c2 == r else 0 for c2 in range(n)]
            for r in range(n)
        ]
        from .matrices import rref_fq

        red, pivots = rref_fq(aug, K)
        if pivots[:n] != list(range(n)):
            raise ArithmeticError("residue-field basis matrix is singular")
        inv = [row[n:] for row in red]
        self._inverse_rows = inv
        return inv

    def from_big(self, a: int) -> PolyFq:
        inv = self._inverse_matrix()
        K = self.prime_ctx
        digits = self.big.to_digits(a)
        n = self.big.e
        sol = [0] * n
        for i in range(n):
            acc = 0
            for j in range(n):
                if digits[j]:
                    acc = K.add(acc, K.mul(inv[i][j], digits[j]))
            sol[i] = acc
        e0 = self.ctx.e
        coeffs = []
        for i in range(self.d):
            coeffs.append(self.ctx.from_digits(sol[i * e0 : (i + 1) * e0]))
        return PolyFq(self.ctx, tuple(coeffs))


# ---------------------------------------------------------------------------
# the maximal order
# ---------------------------------------------------------------------------


class FinitePlace:
    """A place of H_m over the prime p of F_q[t]."""

    __slots__ = ("order", "p", "index", "e", "f", "lattice", "val_elem", "degree")

    def __init__(self, order, p, index, e, f, lattice, val_elem):
        self.order = order
        self.p = p
        self.index = index
        self.e = e
        self.f = f
        self.lattice = lattice  # HNF rows in order coordinates
        self.val_elem = val_elem  # b with v_P(b) = e-1, v_P'(b) >= e' elsewhere
        self.degree = f * p.degree

    def key(self) -> tuple:
        return ("fin", self.p.coeffs, self.index)

    def __repr__(self) -> str:
        return f"FinitePlace(p={self.p.format()!r}, i={self.index}, e={self.e}, f={self.f})"


class InfinitePlace:
    """A degree-1 place above the infinite place of k (which splits
    completely in H_m); identified with an embedding index."""

    __slots__ = ("index", "degree")

    def __init__(self, index: int):
        self.index = index
        self.degree = 1

    def key(self) -> tuple:
        return ("inf", self.index)

    def __repr__(self) -> str:
        return f"InfinitePlace({self.index})"


class MaximalOrder:
    """The integral closure of F_q[t] in H_m, constructed by Round-2
    saturation starting from F_q[t][beta]."""

    def __init__(self, F: RealCycField):
        self.F = F
        self.ctx: FqCtx = F.ctx
        self.n = F.degree
        self.ring = PolyRing(self.ctx)
        B = F.beta_minpoly
        self._beta_pows = self._power_table(B)
        self.disc_gen = self._disc_of_generator(B)
        self.basis, self.den = self._round2()
        self.index_poly = self._index()
        self.disc = self._order_disc()
        self.table = self._mult_table(self.basis, self.den)
        self._places: dict[tuple, list[FinitePlace]] = {}

    # -- beta-power arithmetic ---------------------------------------------------

    def _power_table(self, B: YPoly) -> list[AVec]:
        """beta^j for j in [0, 2n-2] as coordinate vectors on 1..beta^{n-1}."""
        ctx, n = self.ctx, self.n
        pows: list[AVec] = []
        cur = [PolyFq.one(ctx)] + [PolyFq.zero(ctx)] * (n - 1)
        neg_top = [B.coeff(j).scale(ctx.neg(1)) for j in range(n)]
        for _ in range(2 * n - 1):
            pows.append(list(cur))
            top = cur[n - 1]
            nxt = ([PolyFq.zero(ctx)] + cur[: n - 1]) if n > 1 else [PolyFq.zero(ctx)]
            if not top.is_zero():
                nxt = [c + top * t for c, t in zip(nxt, neg_top)]
            cur = nxt
        return pows

    def beta_mul(self, a: AVec, b: AVec) -> AVec:
        """Product of two beta-coordinate vectors, reduced mod the minimal
        polynomial; entries stay in F_q[t]."""
        ctx, n = self.ctx, self.n
        conv = [PolyFq.zero(ctx)] * (2 * n - 1)
        for i, ai in enumerate(a):
            if not ai.is_zero():
                for j, bj in enumerate(b):
                    if not bj.is_zero():
                        conv[i + j] = conv[i + j] + ai * bj
        out = [PolyFq.zero(ctx)] * n
        for d, c in enumerate(conv):
            if not c.is_zero():
                pw = self._beta_pows[d]
                for j in range(n):
                    if not pw[j].is_zero():
                        out[j] = out[j] + c * pw[j]
        return out

    def _disc_of_generator(self, B: YPoly) -> PolyFq:
        """disc(B) = (-1)^{n(n-1)/2} * N(B'(beta)) for monic B."""
        ctx, n = self.ctx, self.n
        Bp = B.derivative()
        bp_vec = [Bp.coeff(j) for j in range(n)]
        rows = []
        for j in range(n):
            rows.append(self.beta_mul(bp_vec, self._beta_pows[j]))
        det = poly_det(rows, ctx)
        if (n * (n - 1) // 2) % 2 == 1 and ctx.p != 2:
            det = det.scale(ctx.neg(1))
        return det

    # -- Round 2 -------------------------------------------------------------------

    def _mult_table(self, basis: list[AVec], den: PolyFq) -> list[list[AVec]]:
        """table[i][j] = order coordinates of w_i * w_j (entries in F_q[t])."""
        ctx, n = self.ctx, self.n
        table: list[list[AVec]] = [[None] * n for _ in range(n)]  # type: ignore
        den_rf = RatFun.from_poly(den)
        for i in range(n):
            for j in range(i, n):
                prod = self.beta_mul(basis[i], basis[j])
                sol = solve_triangular_ratfun(basis, [RatFun.from_poly(c) for c in prod])
                coords = []
                for s in sol:
                    r = s * den_rf.inv()
                    if not r.is_poly():
                        raise ArithmeticError("order basis is not multiplicatively closed")
                    coords.append(r.as_poly())
                table[i][j] = coords
                table[j][i] = coords
        return table

    def _round2(self) -> tuple[list[AVec], PolyFq]:
        ctx, n = self.ctx, self.n
        basis: list[AVec] = [list(self._beta_pows[j]) for j in range(n)]
        den = PolyFq.one(ctx)
        bad = [p for p, e in self.disc_gen.factor() if e >= 2]
        for p in sorted(bad, key=lambda f: (f.degree, tuple(reversed(f.coeffs)))):
            while True:
                new = self._saturate_once(basis, den, p)
                if new is None:
                    break
                basis, den = new
        return basis, den

    def _saturate_once(
        self, basis: list[AVec], den: PolyFq, p: PolyFq
    ) -> tuple[list[AVec], PolyFq] | None:
        """One multiplier-ring step at p; None when the order is p-maximal."""
        ctx, n = self.ctx, self.n
        table = self._mult_table(basis, den)
        iso = ResidueFieldIso(ctx, p)
        big = iso.big
        # structure constants of O/pO over the residue field
        sc = [[[iso.to_big(c) for c in table[i][j]] for j in range(n)] for i in range(n)]
        radical = self._radical(sc, iso)
        # I_p = p*O + radical lifts, as an HNF lattice in order coordinates
        rows: list[AVec] = [
            [p if i == j else PolyFq.zero(ctx) for j in range(n)] for i in range(n)
        ]
        for vec in radical:
            rows.append([iso.from_big(x) for x in vec])
        Ip = hnf(rows, self.ring)
        # multiplier ring: y with y*I_p inside p*I_p
        gamma = Ip
        cons_rows: list[list[int]] = []
        for k in range(n):
            # z_{i,k} = w_i * gamma_k in order coordinates
            for comp in range(n):
                cons_rows.append([0] * n)
            base = len(cons_rows) - n
            for i in range(n):
                z = [PolyFq.zero(ctx)] * n
                for l in range(n):
                    gl = gamma[k][l]
                    if not gl.is_zero():
                        til = table[i][l]
                        for c in range(n):
                            z[c] = z[c] + gl * til[c]
                coords = solve_triangular_exact(Ip, z)
                if coords is None:
                    raise ArithmeticError("ideal is not multiplicatively stable")
                for comp in range(n):
                    cons_rows[base + comp][i] = iso.to_big(coords[comp])
        kernel = nullspace_fq(cons_rows, big)
        if not kernel:
            return None
        # O' = O + (1/p) * kernel lifts
        new_rows: list[AVec] = [[c * p for c in row] for row in basis]
        for vec in kernel:
            u = [iso.from_big(x) for x in vec]  # order coordinates of a multiplier
            w = [PolyFq.zero(ctx)] * n
            for i, ui in enumerate(u):
                if not ui.is_zero():
                    for c in range(n):
                        w[c] = w[c] + ui * basis[i][c]
            new_rows.append(w)
        new_basis = hnf(new_rows, self.ring)
        new_den = den * p
        cont = _content([x for row in new_basis for x in row] + [new_den], ctx)
        if cont.degree > 0:
            new_basis = [[x.exact_div(cont) for x in row] for row in new_basis]
            new_den = new_den.exact_div(cont)
        if new_den == den and new_basis == basis:
            return None
        return new_basis, new_den

    def _radical(self, sc: list[list[list[int]]], iso: ResidueFieldIso) -> list[list[int]]:
        """Basis of the nilradical of O/pO: kernel of x -> x^(|F|^s), |F|^s >= n."""
        big, n = iso.big, self.n
        cardF = iso.ctx.q**iso.d
        s = 1
        while cardF**s < n:
            s += 1
        expo = cardF**s
        cols = []
        for i in range(n):
            v = [0] * n
            v[i] = 1
            cols.append(self._alg_pow(v, expo, sc, big))
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        return nullspace_fq(rows, big)

    @staticmethod
    def _alg_mul(a: list[int], b: list[int], sc, big: FqCtx) -> list[int]:
        n = len(a)
        out = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        coef = big.mul(ai, bj)
                        row = sc[i][j]
                        for c in range(n):
                            if row[c]:
                                out[c] = big.add(out[c], big.mul(coef, row[c]))
        return out

    def _alg_pow(self, a: list[int], e: int, sc, big: FqCtx) -> list[int]:
        result = None
        base = list(a)
        while e:
            if e & 1:
                result = list(base) if result is None else self._alg_mul(result, base, sc, big)
            e >>= 1
            if e:
                base = self._alg_mul(base, base, sc, big)
        assert result is not None
        return result

    # -- order invariants -------------------------------------------------------------

    def _index(self) -> PolyFq:
        """[O : F_q[t][beta]] as a monic polynomial (den^n / prod of pivots)."""
        ctx = self.ctx
        num = self.den.pow(self.n)
        for i in range(self.n):
            num, r = divmod(num, self.basis[i][i])
            if not r.is_zero():
                raise ArithmeticError("order index is not integral")
        return num.monic()

    def _order_disc(self) -> PolyFq:
        d = self.disc_gen
        sq = self.index_poly * self.index_poly
        q, r = divmod(d, sq)
        if not r.is_zero():
            raise ArithmeticError("index squared must divide the generator discriminant")
        return q

    # -- element plumbing ---------------------------------------------------------------

    def elem_mul(self, a: AVec, b: AVec) -> AVec:
        ctx, n = self.ctx, self.n
        out = [PolyFq.zero(ctx)] * n
        table = self.table
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            ti = table[i]
            for j, bj in enumerate(b):
                if bj.is_zero():
                    continue
                coef = ai * bj
                row = ti[j]
                for c in range(n):
                    if not row[c].is_zero():
                        out[c] = out[c] + coef * row[c]
        return out

    @functools.cache
    def one_coords(self) -> AVec:
        ctx, n = self.ctx, self.n
        one_beta = [PolyFq.one(ctx)] + [PolyFq.zero(ctx)] * (n - 1)
        sol = solve_triangular_ratfun(self.basis, [RatFun.from_poly(c) for c in one_beta])
        den_rf = RatFun.from_poly(self.den)
        coords = []
        for s in sol:
            r = s * den_rf.inv()
            if not r.is_poly():
                raise ArithmeticError("1 is not in the order")
            coords.append(r.as_poly())
        return coords

    def to_field(self, coords: AVec, den: PolyFq | None = None) -> HElem:
        """Order coordinates (over a scalar denominator) -> beta-basis element."""
        ctx, n = self.ctx, self.n
        total_den = self.den if den is None else self.den * den
        num = [PolyFq.zero(ctx)] * n
        for i, c in enumerate(coords):
            if not c.is_zero():
                for j in range(n):
                    if not self.basis[i][j].is_zero():
                        num[j] = num[j] + c * self.basis[i][j]
        dr = RatFun.from_poly(total_den)
        return tuple(RatFun.from_poly(x) * dr.inv() for x in num)

    def from_field(self, h: HElem) -> tuple[AVec, PolyFq]:
        """beta-basis element -> (order coordinates, scalar denominator)."""
        ctx, n = self.ctx, self.n
        h = tuple(h) + (RatFun.zero(ctx),) * (n - len(h))
        # clear denominators of the beta coordinates
        den = PolyFq.one(ctx)
        for r in h:
            den = (den * r.den).exact_div(den.gcd(r.den))
        num = [(r * RatFun.from_poly(den)).as_poly() for r in h]
        sol = solve_triangular_ratfun(self.basis, [RatFun.from_poly(c) for c in num])
        scaled = [s * RatFun.from_poly(self.den) for s in sol]
        # common scalar denominator of the order coordinates
        d = PolyFq.one(ctx)
        for s in scaled:
            d = (d * s.den).exact_div(d.gcd(s.den))
        coords = [(s * RatFun.from_poly(d)).as_poly() for s in scaled]
        d_total = den * d
        cont = _content(coords + [d_total], ctx)
        if cont.degree > 0:
            coords = [c.exact_div(cont) for c in coords]
            d_total = d_total.exact_div(cont)
        u = ctx.inv(d_total.lead())
        if u != 1:
            coords = [c.scale(u) for c in coords]
            d_total = d_total.scale(u)
        return coords, d_total

    def norm(self, coords: AVec, den: PolyFq) -> RatFun:
        """Field norm of (1/den) * sum coords_i w_i down to k."""
        n = self.n
        rows = []
        for j in range(n):
            row = [PolyFq.zero(self.ctx)] * n
            for i, ci in enumerate(coords):
                if not ci.is_zero():
                    tij = self.table[i][j]
                    for c in range(n):
                        if not tij[c].is_zero():
                            row[c] = row[c] + ci * tij[c]
            rows.append(row)
        det = poly_det(rows, self.ctx)
        return RatFun.from_poly(det) * RatFun.from_poly(den.pow(n)).inv()

    # -- prime decomposition -----------------------------------------------------------

    def place_decomposition(self, p: PolyFq) -> list[FinitePlace]:
        p = p.monic()
        key = p.coeffs
        if key not in self._places:
            if self.ctx.q ** p.degree > ADD_TABLE_MAX:
                places = self._decompose_etale(p)
            elif (self.index_poly % p).is_zero():
                places = self._decompose_general(p)
            else:
                places = self._decompose_kummer(p)
            ef = sum(pl.e * pl.f for pl in places)
            if ef != self.n:
                raise ArithmeticError(f"e*f sum {ef} != degree {self.n} at {p.format()}")
            self._places[key] = places
        return self._places[key]

    def _decompose_kummer(self, p: PolyFq) -> list[FinitePlace]:
        """Splitting via factorization of the minimal polynomial mod p; valid
        because p does not divide the index of F_q[t][beta] in the order."""
        ctx, n = self.ctx, self.n
        iso = ResidueFieldIso(ctx, p)
        big = iso.big
        B = self.F.beta_minpoly
        bcoeffs = [iso.to_big(B.coeff(j)) for j in range(n)] + [iso.to_big(PolyFq.one(ctx))]
        Bbar = PolyFq(big, tuple(bcoeffs))
        factors = sorted(
            Bbar.factor(), key=lambda fe: (fe[0].degree, tuple(reversed(fe[0].coeffs)))
        )
        places = []
        for idx, (g, e) in enumerate(factors):
            g_lift = [iso.from_big(c) for c in g.coeffs]
            gb = self._eval_ypoly_coords(g_lift)
            lattice = self._two_gen_lattice(p, gb)
            # b = prod_{j != idx} g_j(beta)^{e_j} * g(beta)^{e-1}
            b = None
            for jdx, (g2, e2) in enumerate(factors):
                reps = e2 if jdx != idx else e2 - 1
                if reps == 0:
                    continue
                g2b = self._eval_ypoly_coords([iso.from_big(c) for c in g2.coeffs])
                for _ in range(reps):
                    b = g2b if b is None else self.elem_mul(b, g2b)
            if b is None:
                b = self.one_coords()
            places.append(FinitePlace(self, p, idx, e, g.degree, lattice, b))
        return places

    def _eval_ypoly_coords(self, coeffs: list[PolyFq]) -> AVec:
        """g(beta) in order coordinates, for g given by F_q[t] coefficients."""
        ctx, n = self.ctx, self.n
        beta = list(self._beta_coords())
        one = self.one_coords()
        acc = [PolyFq.zero(ctx)] * n
        for c in reversed(coeffs):
            acc = self.elem_mul(acc, beta)
            if not c.is_zero():
                acc = [a + c * o for a, o in zip(acc, one)]
        return acc

    @functools.cache
    def _beta_coords(self) -> tuple[PolyFq, ...]:
        ctx, n = self.ctx, self.n
        if n == 1:
            beta_vec = [self.F.beta_minpoly.coeff(0).scale(ctx.neg(1))]
        else:
            beta_vec = [PolyFq.zero(ctx), PolyFq.one(ctx)] + [PolyFq.zero(ctx)] * (n - 2)
        sol = solve_triangular_ratfun(self.basis, [RatFun.from_poly(c) for c in beta_vec])
        den_rf = RatFun.from_poly(self.den)
        coords = []
        for s in sol:
            r = s * den_rf.inv()
            if not r.is_poly():
                raise ArithmeticError("beta is not in the order")
            coords.append(r.as_poly())
        return tuple(coords)

    def _two_gen_lattice(self, p: PolyFq, b: AVec) -> list[AVec]:
        """HNF lattice of p*O + b*O in order coordinates."""
        ctx, n = self.ctx, self.n
        rows: list[AVec] = [
            [p if i == j else PolyFq.zero(ctx) for j in range(n)] for i in range(n)
        ]
        for i in range(n):
            unit = [PolyFq.one(ctx) if j == i else PolyFq.zero(ctx) for j in range(n)]
            rows.append(self.elem_mul(b, unit))
        return hnf(rows, self.ring)

    def _decompose_etale(self, p: PolyFq) -> list[FinitePlace]:
        """Splitting of a prime whose residue field exceeds the table bound,
        by F_q-linear algebra on O/pO.  Every such prime has large degree, so
        it is unramified and prime to the index; its splitting type comes from
        the Artin symbol and the places from Frobenius eigenspaces."""
        ctx, n = self.ctx, self.n
        if (self.disc % p).is_zero() or (self.index_poly % p).is_zero():
            raise ArithmeticError("large prime unexpectedly divides the discriminant")
        G = self.F.G
        f = G.element_order(G.artin_symbol(p))
        g = n // f
        one = self.one_coords()
        if g == 1:
            rows = [
                [p if i == j else PolyFq.zero(ctx) for j in range(n)] for i in range(n)
            ]
            return [FinitePlace(self, p, 0, 1, f, hnf(rows, self.ring), list(one))]
        d = p.degree
        q = ctx.q
        N = n * d

        def red(a: AVec) -> AVec:
            return [c % p for c in a]

        def amul(a: AVec, b: AVec) -> AVec:
            return red(self.elem_mul(a, b))

        def to_vec(a: AVec) -> list[int]:
            return [a[i][k] for i in range(n) for k in range(d)]

        def from_vec(v: list[int]) -> AVec:
            return [PolyFq(ctx, v[i * d : (i + 1) * d]) for i in range(n)]

        def apow_q(a: AVec) -> AVec:
            out = None
            base = a
            e = q
            while e:
                if e & 1:
                    out = base if out is None else amul(out, base)
                e >>= 1
                if e:
                    base = amul(base, base)
            return out

        basis: list[AVec] = []
        for i in range(n):
            for k in range(d):
                a = [PolyFq.zero(ctx)] * n
                a[i] = PolyFq.monomial(ctx, 1, k)
                basis.append(a)
        # fixed space of the q-power Frobenius: dimension = number of places
        cols = [to_vec([x - y for x, y in zip(apow_q(b), b)]) for b in basis]
        M = [[cols[j][r] for j in range(N)] for r in range(N)]
        fixed = nullspace_fq(M, ctx)
        if len(fixed) != g:
            raise ArithmeticError("Frobenius fixed space contradicts the Artin symbol")
        comps: list[list[list[int]]] = [[to_vec(b) for b in basis]]
        for z_vec in fixed:
            z = from_vec(z_vec)
            nxt: list[list[list[int]]] = []
            for comp in comps:
                if len(comp) == f * d:
                    nxt.append(comp)
                    continue
                rows_T = [[comp[j][r] for j in range(len(comp))] for r in range(N)]
                imgs = [to_vec(amul(z, from_vec(v))) for v in comp]
                mz = _solve_many_fq(rows_T, imgs, ctx)
                if mz is None:
                    raise ArithmeticError("component not closed under multiplication")
                dim = len(comp)
                split_total = 0
                for c in range(q):
                    shifted = [
                        [ctx.sub(mz[j][r], c if j == r else 0) for j in range(dim)]
                        for r in range(dim)
                    ]
                    kern = nullspace_fq(shifted, ctx)
                    if not kern:
                        continue
                    sub = []
                    for w in kern:
                        vec = [0] * N
                        for wj, bv in zip(w, comp):
                            if wj:
                                for r in range(N):
                                    vec[r] = ctx.add(vec[r], ctx.mul(wj, bv[r]))
                        sub.append(vec)
                    split_total += len(sub)
                    nxt.append(sub)
                if split_total != dim:
                    raise ArithmeticError("Frobenius eigenspaces do not fill the algebra")
            comps = nxt
        if len(comps) != g or any(len(c) != f * d for c in comps):
            raise ArithmeticError("etale splitting produced inconsistent components")
        # idempotent of each component: decompose 1 over the combined basis
        allb = [v for comp in comps for v in comp]
        rows_T = [[allb[j][r] for j in range(N)] for r in range(N)]
        xsol = solve_fq(rows_T, to_vec(red(list(one))), ctx)
        if xsol is None:
            raise ArithmeticError("unit has no decomposition over the components")
        keyed = []
        offset = 0
        for comp in comps:
            eps = [0] * N
            for wj, bv in zip(xsol[offset : offset + len(comp)], comp):
                if wj:
                    for r in range(N):
                        eps[r] = ctx.add(eps[r], ctx.mul(wj, bv[r]))
            offset += len(comp)
            eps_elem = from_vec(eps)
            cogen = red([o - e2 for o, e2 in zip(one, eps_elem)])
            lattice = self._two_gen_lattice(p, cogen)
            key = tuple(tuple(c.coeffs for c in row) for row in lattice)
            keyed.append((key, lattice, eps_elem))
        keyed.sort(key=lambda it: it[0])
        return [
            FinitePlace(self, p, idx, 1, f, lattice, eps_elem)
            for idx, (_, lattice, eps_elem) in enumerate(keyed)
        ]

    def _decompose_general(self, p: PolyFq) -> list[FinitePlace]:
        """Splitting of O/pO by Berlekamp fixed-space eigenvalue separation."""
        ctx, n = self.ctx, self.n
        iso = ResidueFieldIso(ctx, p)
        big = iso.big
        sc = [[[iso.to_big(c) for c in self.table[i][j]] for j in range(n)] for i in range(n)]
        radical = self._radical(sc, iso)
        cardF = ctx.q**p.degree
        # split the full algebra into local components (bases over big)
        components = self._split_components([self._unit_rows(n)], sc, big, cardF)
        places = []
        comp_data = []
        for comp in components:
            inter = self._subspace_intersection_dim(comp, radical, big)
            f = len(comp) - inter
            comp_data.append((comp, f))
        fs = {f for _, f in comp_data}
        if len(fs) != 1:
            raise ArithmeticError("residue degrees differ across a Galois orbit")
        f = fs.pop()
        g = len(comp_data)
        if n % (f * g) != 0:
            raise ArithmeticError("inconsistent splitting data")
        e = n // (f * g)
        comp_data.sort(key=lambda cf: tuple(sorted(map(tuple, cf[0]))))
        for idx, (comp, f_i) in enumerate(comp_data):
            # maximal ideal: radical + all other components
            mrows = [list(r) for r in radical]
            for jdx, (other, _) in enumerate(comp_data):
                if jdx != idx:
                    mrows.extend(list(r) for r in other)
            lattice_rows: list[AVec] = [
                [p if i == j else PolyFq.zero(ctx) for j in range(n)] for i in range(n)
            ]
            for vec in mrows:
                lattice_rows.append([iso.from_big(x) for x in vec])
            lattice = hnf(lattice_rows, self.ring)
            b = self._valuation_element(p, lattice, iso)
            places.append(FinitePlace(self, p, idx, e, f_i, lattice, b))
        return places

    @staticmethod
    def _unit_rows(n: int) -> list[list[int]]:
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]

    def _split_components(self, stack, sc, big, cardF) -> list[list[list[int]]]:
        """Recursively split subalgebra ideals using elements fixed by the
        residue-field Frobenius; returns bases of the local components."""
        from .matrices import rref_fq

        out = []
        work = list(stack)
        n = self.n
        while work:
            V = work.pop()
            dim = len(V)
            # Frobenius-fixed subspace of V: x in span(V) with x^cardF = x
            img = [self._alg_pow(v, cardF, sc, big) for v in V]
            red, piv = rref_fq([list(v) for v in V], big)

            def coords_in_V(x):
                y = list(x)
                cs = []
                for r, pc in zip(red, piv):
                    c = y[pc]
                    cs.append(c)
                    if c:
                        for j in range(n):
                            y[j] = big.sub(y[j], big.mul(c, r[j]))
                if any(y):
                    raise ArithmeticError("vector escapes its subalgebra")
                return cs

            M = [coords_in_V(x) for x in img]  # row i = coords of V_i^cardF
            lin = [
                [big.sub(M[i][j], 1 if i == j else 0) for j in range(dim)]
                for i in range(dim)
            ]
            # kernel of (row-vector acting) c -> c*(M - I): use transpose for nullspace
            ker = nullspace_fq([[lin[i][j] for i in range(dim)] for j in range(dim)], big)
            fixed = []
            for kv in ker:
                vec = [0] * n
                for c, v in zip(kv, V):
                    if c:
                        for j in range(n):
                            vec[j] = big.add(vec[j], big.mul(c, v[j]))
                fixed.append(vec)
            if len(fixed) <= 1:
                out.append(V)
                continue
            # find a fixed element with at least two distinct eigenvalues
            split_done = False
            for b in fixed:
                # eigenvalues: roots of the minimal polynomial of b on V
                lam = self._eigen_split(V, b, sc, big)
                if lam is not None and len(lam) > 1:
                    work.extend(lam)
                    split_done = True
                    break
            if not split_done:
                out.append(V)
        return out

    def _eigen_split(self, V, b, sc, big):
        """Split span(V) into generalized eigenspaces of multiplication by b."""
        from .matrices import rref_fq

        n = self.n
        dim = len(V)
        red, piv = rref_fq([list(v) for v in V], big)

        def coords_in_V(x):
            y = list(x)
            cs = []
            for r, pc in zip(red, piv):
                c = y[pc]
                cs.append(c)
                if c:
                    for j in range(n):
                        y[j] = big.sub(y[j], big.mul(c, r[j]))
            if any(y):
                raise ArithmeticError("vector escapes its subalgebra")
            return cs

        # matrix of multiplication by b on V; b is Frobenius-fixed, so its
        # minimal polynomial splits into distinct linear factors over the
        # residue field and the eigenvalues are its roots
        M = [coords_in_V(self._alg_mul(v, b, sc, big)) for v in V]  # row per basis vec
        mp = _matrix_minpoly(M, big)
        roots = mp.roots()
        if len(roots) <= 1:
            return None
        pieces = []
        for lam in sorted(roots):
            shifted = [[big.sub(M[i][j], lam if i == j else 0) for j in range(dim)] for i in range(dim)]
            power = shifted
            for _ in range(dim.bit_length()):
                power = _matmul_big(power, power, big)
            ker = nullspace_fq([[power[i][j] for i in range(dim)] for j in range(dim)], big)
            piece = []
            for kv in ker:
                vec = [0] * n
                for c, v in zip(kv, V):
                    if c:
                        for j in range(n):
                            vec[j] = big.add(vec[j], big.mul(c, v[j]))
                piece.append(vec)
            if piece:
                pieces.append(piece)
        if len(pieces) <= 1:
            return None
        return pieces

    def _subspace_intersection_dim(self, U, W, big) -> int:
        if not U or not W:
            return 0
        from .matrices import rref_fq

        ru, _ = rref_fq([list(v) for v in U], big)
        rw, _ = rref_fq([list(v) for v in W], big)
        rboth, _ = rref_fq([list(v) for v in U] + [list(v) for v in W], big)
        return len(ru) + len(rw) - len(rboth)

    def _valuation_element(self, p: PolyFq, lattice: list[AVec], iso: ResidueFieldIso) -> AVec:
        """b in O with b*P inside pO and b outside pO."""
        ctx, n = self.ctx, self.n
        big = iso.big
        rows: list[list[int]] = []
        for k in range(n):
            gk = lattice[k]
            for comp in range(n):
                rows.append([0] * n)
            base = len(rows) - n
            for i in range(n):
                z = [PolyFq.zero(ctx)] * n
                for l in range(n):
                    gl = gk[l]
                    if not gl.is_zero():
                        til = self.table[i][l]
                        for c in range(n):
                            z[c] = z[c] + gl * til[c]
                for comp in range(n):
                    rows[base + comp][i] = iso.to_big(z[comp] % p)
        kernel = nullspace_fq(rows, big)
        if not kernel:
            raise ArithmeticError("no valuation element exists; lattice is not a proper ideal")
        return [iso.from_big(x) for x in kernel[0]]

    # -- valuations ---------------------------------------------------------------------

    def valuation(self, place: FinitePlace, coords: AVec) -> int:
        """v_P of an order element given by its coordinate vector."""
        if all(c.is_zero() for c in coords):
            raise ZeroDivisionError("valuation of zero")
        p = place.p
        b = place.val_elem
        v = 0
        y = list(coords)
        while True:
            z = self.elem_mul(y, b)
            quots = []
            ok = True
            for c in z:
                q, r = divmod(c, p)
                if not r.is_zero():
                    ok = False
                    break
                quots.append(q)
            if not ok:
                return v
            y = quots
            v += 1


def _solve_many_fq(
    rows: list[list[int]], rhs_list: list[list[int]], ctx: FqCtx
) -> list[list[int]] | None:
    """Solutions x_k of rows @ x_k = rhs_k in one elimination pass; the
    column space must have full rank so each solution is unique."""
    from .matrices import rref_fq

    nc = len(rows[0]) if rows else 0
    k = len(rhs_list)
    aug = [list(r) + [rhs[i] for rhs in rhs_list] for i, r in enumerate(rows)]
    red, pivots = rref_fq(aug, ctx)
    sols = [[0] * nc for _ in range(k)]
    for row, pc in zip(red, pivots):
        if pc >= nc:
            return None
        for j in range(k):
            sols[j][pc] = row[nc + j]
    return sols


def _matmul_big(A: list[list[int]], B: list[list[int]], big: FqCtx) -> list[list[int]]:
    n = len(A)
    m = len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for k in range(len(B)):
            a = A[i][k]
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(m):
                    if Bk[j]:
                        row[j] = big.add(row[j], big.mul(a, Bk[j]))
    return out


def _matrix_minpoly(M: list[list[int]], big: FqCtx) -> PolyFq:
    """Minimal polynomial of a square matrix over F_{q'} (by Krylov spans)."""
    from .matrices import rref_fq, solve_fq

    n = len(M)
    best: PolyFq | None = None
    for start in range(n):
        v = [1 if j == start else 0 for j in range(n)]
        krylov = [list(v)]
        while True:
            nxt = [0] * n
            cur = krylov[-1]
            for i in range(n):
                c = cur[i]
                if c:
                    for j in range(n):
                        if M[i][j]:
                            nxt[j] = big.add(nxt[j], big.mul(c, M[i][j]))
            rows = [list(r) for r in krylov]
            sol = solve_fq([[rows[i][j] for i in range(len(rows))] for j in range(n)], nxt, big)
            if sol is not None:
                coeffs = [big.neg(c) for c in sol] + [1]
                cand = PolyFq(big, tuple(coeffs))
                best = cand if best is None else _poly_lcm(best, cand)
                break
            krylov.append(nxt)
        if best is not None and best.degree == n:
            break
    assert best is not None
    return best


def _poly_lcm(a: PolyFq, b: PolyFq) -> PolyFq:
    g = a.gcd(b)
    return (a * b).exact_div(g).monic()
