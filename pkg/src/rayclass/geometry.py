"""Places, divisors, and the degree-zero class group of H_m.

Finite places come from the maximal order, infinite places from the series
embeddings.  Riemann-Roch spaces are computed with reduced F_q[t]-bases of
fractional ideals (reduction at infinity), which yields principality tests
and full divisor-class arithmetic.  An independent point-counting zeta
oracle, group-ring idempotents mod ell^K, the regulator ell-parts, and the
structure of small class-group components are built on top.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from .ffield import FqCtx
from .fqpoly import PolyFq, monic_polys
from .galois import GaloisGroup
from .laurent import LaurentSeries, PrecisionError
from .matrices import ZZ, PolyRing, hnf, int_inverse, nullspace_fq, smith_normal_form
from .orders import FinitePlace, InfinitePlace, MaximalOrder
from .cycfield import MAX_PRECISION, HElem, RealCycField
from .ratfun import RatFun
from . import ffield


class ConsistencyError(ArithmeticError):
    """An internal cross-check failed: two pipelines disagree."""


class IncompleteGeneratorsError(ConsistencyError):
    """The small-place generator search did not reach the whole group."""


# ---------------------------------------------------------------------------
# divisors


class Divisor:
    """Formal Z-combination of places, keyed by place.key()."""

    __slots__ = ("entries",)

    def __init__(self, items: dict | None = None):
        self.entries: dict = {}
        if items:
            for key, (pl, c) in items.items():
                if c:
                    self.entries[key] = (pl, c)

    @staticmethod
    def of(place, coeff: int = 1) -> "Divisor":
        d = Divisor()
        if coeff:
            d.entries[place.key()] = (place, coeff)
        return d

    def items(self) -> list[tuple[object, int]]:
        return [self.entries[k] for k in sorted(self.entries)]

    def coeff(self, place) -> int:
        got = self.entries.get(place.key())
        return got[1] if got else 0

    def degree(self) -> int:
        return sum(c * pl.degree for pl, c in self.entries.values())

    def is_zero(self) -> bool:
        return not self.entries

    def is_effective(self) -> bool:
        return all(c >= 0 for _, c in self.entries.values())

    def _merged(self, other: "Divisor", sign: int) -> "Divisor":
        out = Divisor()
        out.entries = dict(self.entries)
        for k, (pl, c) in other.entries.items():
            cur = out.entries.get(k)
            nc = (cur[1] if cur else 0) + sign * c
            if nc:
                out.entries[k] = (pl, nc)
            elif cur:
                del out.entries[k]
        return out

    def __add__(self, other: "Divisor") -> "Divisor":
        return self._merged(other, 1)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self._merged(other, -1)

    def __neg__(self) -> "Divisor":
        return self.scale(-1)

    def scale(self, k: int) -> "Divisor":
        out = Divisor()
        if k:
            out.entries = {key: (pl, k * c) for key, (pl, c) in self.entries.items()}
        return out

    def finite_items(self) -> list[tuple[FinitePlace, int]]:
        return [(pl, c) for pl, c in self.items() if isinstance(pl, FinitePlace)]

    def infinite_items(self) -> list[tuple[InfinitePlace, int]]:
        return [(pl, c) for pl, c in self.items() if isinstance(pl, InfinitePlace)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return {k: c for k, (_, c) in self.entries.items()} == {
            k: c for k, (_, c) in other.entries.items()
        }

    def __repr__(self) -> str:
        if not self.entries:
            return "Divisor(0)"
        parts = [f"{c}*{pl!r}" for pl, c in self.items()]
        return "Divisor(" + " + ".join(parts) + ")"


class DivisorClass:
    """A divisor class represented as [R - r*inf0] with R effective."""

    __slots__ = ("geom", "R", "r")

    def __init__(self, geom: "Geometry", R: Divisor, r: int):
        self.geom = geom
        self.R = R
        self.r = r

    def divisor(self) -> Divisor:
        return self.R - Divisor.of(self.geom.inf0, self.r)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return self.geom.class_of(self.divisor() + other.divisor())

    def __neg__(self) -> "DivisorClass":
        return self.geom.class_of(-self.divisor())

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self.geom.class_of(self.divisor() - other.divisor())

    def scale(self, k: int) -> "DivisorClass":
        geom = self.geom
        if k == 0:
            return geom.zero_class()
        base = self if k > 0 else -self
        k = abs(k)
        acc = None
        cur = base
        while k:
            if k & 1:
                acc = cur if acc is None else acc + cur
            k >>= 1
            if k:
                cur = cur + cur
        return acc

    def is_zero(self) -> bool:
        ok, _ = self.geom.principality_test(self.divisor())
        return ok

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        ok, _ = self.geom.principality_test(self.divisor() - other.divisor())
        return ok


# ---------------------------------------------------------------------------
# geometry of the field


class Geometry:
    """Divisor arithmetic for the full field H_m over F_q[t]."""

    def __init__(self, F: RealCycField):
        self.F = F
        self.ctx: FqCtx = F.ctx
        self.G: GaloisGroup = F.G
        self.n = F.degree
        self.order = MaximalOrder(F)
        d = self.order.disc.degree
        if d % 2:
            raise ConsistencyError("odd-degree discriminant; genus is not integral")
        self.genus = 1 - self.n + d // 2
        if self.genus < 0:
            raise ConsistencyError("negative genus from the order discriminant")
        self.ring = PolyRing(self.ctx)
        self._inf = [InfinitePlace(i) for i in range(self.n)]
        self.inf0 = self._inf[self.G.identity]
        self._prec = 32
        self._sigma_place_cache: dict = {}
        self._zero_class: DivisorClass | None = None
        self._inf_base: dict[int, DivisorClass] = {}

    # -- places -----------------------------------------------------------------

    def places_above(self, p: PolyFq) -> list[FinitePlace]:
        return self.order.place_decomposition(p)

    def infinite_place(self, i: int) -> InfinitePlace:
        return self._inf[i]

    def infinity_divisor(self) -> Divisor:
        """The pullback of the infinite place of k: all n places above it."""
        out = Divisor()
        for pl in self._inf:
            out = out + Divisor.of(pl)
        return out

    # -- series embeddings --------------------------------------------------------

    def _embedding(self):
        return self.F.embedding(self._prec)

    def _grow(self) -> None:
        if self._prec * 2 > MAX_PRECISION:
            raise PrecisionError("precision cap exceeded in divisor arithmetic")
        self._prec *= 2

    def _ratfun_series(self, f: RatFun, prec: int) -> LaurentSeries:
        num = LaurentSeries.from_poly_t(f.num, 1, prec)
        if f.den.is_one():
            return num
        return num * LaurentSeries.from_poly_t(f.den, 1, prec).inv()

    def _elem_series(self, h: HElem, emb, i: int) -> LaurentSeries:
        root = emb.roots[i]
        prec = root.prec
        acc = LaurentSeries.zero(self.ctx, 1, prec)
        for c in reversed(h):
            acc = acc * root
            if not c.is_zero():
                acc = acc + self._ratfun_series(c, prec)
        return acc

    def infinite_valuations(self, h: HElem) -> list[int]:
        """v at every infinite place (in 1/t; negative = pole)."""
        while True:
            emb = self._embedding()
            try:
                return [self._elem_series(h, emb, i).valuation() for i in range(self.n)]
            except PrecisionError:
                self._grow()

    # -- principal divisors ---------------------------------------------------------

    def principal_divisor(self, h: HElem) -> Divisor:
        coords, den = self.order.from_field(h)
        if all(c.is_zero() for c in coords):
            raise ValueError("the zero element has no divisor")
        out = Divisor()
        nm = self.order.norm(coords, den)
        seen: set = set()
        candidates = [p for p, _ in nm.num.factor()] + [p for p, _ in den.factor()]
        for p in candidates:
            if tuple(p.coeffs) in seen:
                continue
            seen.add(tuple(p.coeffs))
            mult = 0
            dd = den
            while (dd % p).is_zero():
                dd = dd.exact_div(p)
                mult += 1
            for pl in self.places_above(p):
                v = self.order.valuation(pl, coords) - pl.e * mult
                if v:
                    out = out + Divisor.of(pl, v)
        for i, v in enumerate(self.infinite_valuations(h)):
            if v:
                out = out + Divisor.of(self._inf[i], v)
        if out.degree() != 0:
            raise ConsistencyError("divisor of a function has nonzero degree")
        return out

    # -- fractional ideals of finite parts -----------------------------------------

    def _unit_rows(self) -> list[list[PolyFq]]:
        one = PolyFq.one(self.ctx)
        zero = PolyFq.zero(self.ctx)
        return [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]

    def _ideal_mul_place(self, rows, place: FinitePlace):
        prods = [self.order.elem_mul(r, s) for r in rows for s in place.lattice]
        return hnf(prods, self.ring)

    def _ideal_div_place(self, rows, place: FinitePlace):
        p = place.p
        new = [[e * p for e in r] for r in rows]
        new += [self.order.elem_mul(r, place.val_elem) for r in rows]
        return hnf(new, self.ring), p

    def _ideal_for(self, D: Divisor) -> tuple[list[list[PolyFq]], PolyFq]:
        """HNF basis (rows, denominator) of the fractional ideal of elements
        with v_P >= -coeff_P(D) at every finite place."""
        rows = self._unit_rows()
        den = PolyFq.one(self.ctx)
        for pl, c in D.finite_items():
            for _ in range(-c if c < 0 else 0):
                rows = self._ideal_mul_place(rows, pl)
            for _ in range(c if c > 0 else 0):
                rows, p = self._ideal_div_place(rows, pl)
                den = den * p
        return rows, den

    # -- Riemann-Roch spaces ----------------------------------------------------------

    def _reduce_at_infinity(self, elems: list[HElem], emb):
        """Reduce an F_q[t]-basis so pole degrees are simultaneously minimal.

        Returns (elems, pole_degrees, series matrix eps[i][j]).
        """
        n = self.n
        t = PolyFq.x(self.ctx)
        eps = [[self._elem_series(b, emb, i) for b in elems] for i in range(n)]
        while True:
            d = [max(-eps[i][j].valuation() for i in range(n)) for j in range(n)]
            C = [[eps[i][j].coeff(-d[j]) for j in range(n)] for i in range(n)]
            kern = nullspace_fq(C, self.ctx)
            if not kern:
                return elems, d, eps
            u = kern[0]
            support = [j for j in range(n) if u[j]]
            j0 = max(support, key=lambda j: d[j])
            new = None
            for j in support:
                term = tuple(
                    c * RatFun.from_poly(PolyFq.monomial(self.ctx, u[j], d[j0] - d[j]))
                    for c in elems[j]
                )
                new = term if new is None else self.F.add(new, term)
            elems[j0] = new
            for i in range(n):
                eps[i][j0] = self._elem_series(new, emb, i)

    def riemann_roch_basis(self, D: Divisor) -> list[HElem]:
        """An F_q-basis of L(D) = {h != 0 : [h] >= -D} together with 0."""
        rows, den = self._ideal_for(D)
        base = [self.order.to_field(r, den) for r in rows]
        cinf = [0] * self.n
        for pl, c in D.infinite_items():
            cinf[pl.index] = c
        while True:
            try:
                return self._rr_with_basis(list(base), cinf)
            except PrecisionError:
                self._grow()

    def _rr_with_basis(self, elems: list[HElem], cinf: list[int]) -> list[HElem]:
        emb = self._embedding()
        elems, d, eps = self._reduce_at_infinity(elems, emb)
        c = max(cinf)
        unknowns = [(j, s) for j in range(self.n) for s in range(c - d[j] + 1)]
        if not unknowns:
            return []
        rows = []
        for i in range(self.n):
            for e in range(cinf[i] + 1, c + 1):
                rows.append([eps[i][j].coeff(-(e - s)) for j, s in unknowns])
        if not rows:
            kern = [[0] * len(unknowns) for _ in range(len(unknowns))]
            for i in range(len(unknowns)):
                kern[i][i] = 1
        else:
            kern = nullspace_fq(rows, self.ctx)
        out = []
        for vec in kern:
            h = None
            for a, (j, s) in zip(vec, unknowns):
                if not a:
                    continue
                term = tuple(
                    cc * RatFun.from_poly(PolyFq.monomial(self.ctx, a, s))
                    for cc in elems[j]
                )
                h = term if h is None else self.F.add(h, term)
            out.append(h)
        return out

    def riemann_roch_dim(self, D: Divisor) -> int:
        return len(self.riemann_roch_basis(D))

    def principality_test(self, D: Divisor) -> tuple[bool, HElem | None]:
        if D.degree() != 0:
            raise ValueError("principality test requires a degree-0 divisor")
        basis = self.riemann_roch_basis(D)
        if not basis:
            return False, None
        if len(basis) != 1:
            raise ConsistencyError("degree-0 divisor with dim L(D) > 1")
        return True, basis[0]

    # -- canonical divisor ------------------------------------------------------------

    def _trace(self, coords) -> PolyFq:
        tr = PolyFq.zero(self.ctx)
        for k in range(self.n):
            unit = [PolyFq.zero(self.ctx)] * self.n
            unit[k] = PolyFq.one(self.ctx)
            tr = tr + self.order.elem_mul(coords, unit)[k]
        return tr

    def different_divisor(self) -> Divisor:
        """The different of the maximal order, from the trace dual."""
        n = self.n
        T = []
        for i in range(n):
            unit = [PolyFq.zero(self.ctx)] * n
            unit[i] = PolyFq.one(self.ctx)
            T.append([self._trace(self.order.elem_mul(unit, u2)) for u2 in self._units()])
        inv = _ratfun_inverse(T, self.ctx)
        out = Divisor()
        for p, _ in self.order.disc.factor():
            for pl in self.places_above(p):
                vals = []
                for row in inv:
                    den = PolyFq.one(self.ctx)
                    for f in row:
                        den = _poly_lcm_local(den, f.den)
                    cleared = [(f * RatFun.from_poly(den)).as_poly() for f in row]
                    mult = 0
                    dd = den
                    while (dd % p).is_zero():
                        dd = dd.exact_div(p)
                        mult += 1
                    vals.append(self.order.valuation(pl, cleared) - pl.e * mult)
                d = -min(vals)
                if d:
                    out = out + Divisor.of(pl, d)
        if out.degree() != self.order.disc.degree:
            raise ConsistencyError("different degree does not match the discriminant")
        return out

    def _units(self):
        out = []
        for i in range(self.n):
            unit = [PolyFq.zero(self.ctx)] * self.n
            unit[i] = PolyFq.one(self.ctx)
            out.append(unit)
        return out

    def canonical_divisor(self) -> Divisor:
        K = self.different_divisor() - self.infinity_divisor().scale(2)
        if K.degree() != 2 * self.genus - 2:
            raise ConsistencyError("canonical divisor has the wrong degree")
        return K

    # -- divisor classes --------------------------------------------------------------

    def class_of(self, D: Divisor) -> DivisorClass:
        if D.degree() != 0:
            raise ValueError("divisor classes are taken in degree 0")
        E = D + Divisor.of(self.inf0, self.genus)
        basis = self.riemann_roch_basis(E)
        if not basis:
            raise ConsistencyError("empty Riemann-Roch space at degree = genus")
        h = basis[0]
        R = E + self.principal_divisor(h)
        if not R.is_effective():
            raise ConsistencyError("class reduction produced a non-effective divisor")
        return DivisorClass(self, R, self.genus)

    def zero_class(self) -> DivisorClass:
        if self._zero_class is None:
            self._zero_class = self.class_of(Divisor())
        return self._zero_class

    def infinite_base_class(self, i: int) -> DivisorClass:
        """Class of (inf_i - inf_0), cached."""
        if i not in self._inf_base:
            D = Divisor.of(self._inf[i]) - Divisor.of(self.inf0)
            self._inf_base[i] = self.class_of(D)
        return self._inf_base[i]

    # -- Galois action ------------------------------------------------------------------

    def sigma_place(self, s: int, place):
        """Image of a place under the automorphism indexed by s."""
        if isinstance(place, InfinitePlace):
            return self._inf[self.G.mul(place.index, self.G.inv(s))]
        key = (s, place.key())
        if key in self._sigma_place_cache:
            return self._sigma_place_cache[key]
        rows = []
        for r in place.lattice:
            h = self.order.to_field(r)
            img = self.F.apply_sigma(s, h)
            coords, den = self.order.from_field(img)
            if den.degree != 0 or not den.is_one():
                raise ConsistencyError("automorphism image left the maximal order")
            rows.append(coords)
        target = hnf(rows, self.ring)
        found = None
        for cand in self.places_above(place.p):
            if cand.lattice == target:
                found = cand
                break
        if found is None:
            raise ConsistencyError("automorphism image is not a place lattice")
        self._sigma_place_cache[key] = found
        return found

    def sigma_divisor(self, s: int, D: Divisor) -> Divisor:
        out = Divisor()
        for pl, c in D.items():
            out = out + Divisor.of(self.sigma_place(s, pl), c)
        return out

    def apply_group_ring(self, coeffs: dict[int, int], D: Divisor) -> DivisorClass:
        """Class of (sum_s coeffs[s]*sigma_s)(D) for a degree-0 divisor D."""
        acc = self.zero_class()
        for s, c in sorted(coeffs.items()):
            if not c:
                continue
            acc = acc + self.class_of(self.sigma_divisor(s, D)).scale(c)
        return acc


def _poly_lcm_local(a: PolyFq, b: PolyFq) -> PolyFq:
    if a.is_one():
        return b.monic()
    if b.is_one():
        return a.monic()
    return (a * b).exact_div(a.gcd(b)).monic()


def _ratfun_inverse(T: list[list[PolyFq]], ctx: FqCtx) -> list[list[RatFun]]:
    """Inverse of a nonsingular polynomial matrix, over rational functions."""
    n = len(T)
    a = [[RatFun.from_poly(e) for e in row] for row in T]
    inv = [[RatFun.one(ctx) if i == j else RatFun.zero(ctx) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if not a[i][col].is_zero())
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        scale = a[col][col].inv()
        a[col] = [x * scale for x in a[col]]
        inv[col] = [x * scale for x in inv[col]]
        for i in range(n):
            if i == col or a[i][col].is_zero():
                continue
            f = a[i][col]
            a[i] = [x - f * y for x, y in zip(a[i], a[col])]
            inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# zeta oracle by point counting


def _subfield_splitting(fc, p: PolyFq) -> tuple[int, int, int]:
    """(e, f, g) of a prime p | m in the subfield cut out by fc's subgroup."""
    G, S = fc.G, fc.S
    m = G.modulus
    mprime = m
    while (mprime % p).is_zero():
        mprime = mprime.exact_div(p)
    if mprime.degree == 0:
        inertia = list(range(G.order))
        frob = G.identity
    else:
        Gp = GaloisGroup(mprime)
        proj = G.project_to(Gp)
        inertia = [i for i in range(G.order) if proj[i] == Gp.identity]
        a = Gp.artin_symbol(p)
        frob = next(i for i in range(G.order) if proj[i] == a)
    e = len({S.coset_of[i] for i in inertia})
    dec = G.subgroup_closure(inertia + [frob])
    df = len({S.coset_of[i] for i in dec})
    f = df // e
    return e, f, fc.degree // df


def _q_convolve(Q, A: dict[int, int], B: dict[int, int]) -> dict[int, int]:
    out: Counter = Counter()
    for s, a in A.items():
        for u, b in B.items():
            out[Q.mul(s, u)] += a * b
    return {k: v for k, v in out.items() if v}


def _q_pow(Q, s: int, k: int) -> int:
    out = Q.identity
    for _ in range(k):
        out = Q.mul(out, s)
    return out


def _q_order(Q, s: int) -> int:
    k = 1
    x = s
    while x != Q.identity:
        x = Q.mul(x, s)
        k += 1
    return k


def zeta_numerator(fc) -> dict:
    """Point-counting oracle: genus, counts N_i, numerator P, and h = P(1).

    The genus comes from the conductors of the field characters; places are
    counted from the splitting of primes, using exact equidistribution of
    monic polynomials in residue classes for degrees >= deg m.
    """
    G, S, Q = fc.G, fc.S, fc.Q
    m = fc.modulus
    ctx = fc.ctx
    q = ctx.q
    n = fc.degree
    cond_sum = sum(th.conductor().degree for th in fc.field_characters())
    if cond_sum % 2:
        raise ConsistencyError("odd conductor sum; genus is not integral")
    g = 1 - n + cond_sum // 2
    if g < 0:
        raise ConsistencyError("negative genus from character conductors")
    depth = g + 1

    B: Counter = Counter()
    B[1] += n  # infinity splits completely into n degree-1 places
    for p, _ in m.factor():
        e, f, gp = _subfield_splitting(fc, p)
        d = f * p.degree
        if d <= depth:
            B[d] += gp

    # class-by-class counts of monic polynomials coprime to m
    v: list[dict[int, int]] = [{Q.identity: 1}]
    hsize = len(S.H)
    for d in range(1, depth + 1):
        if d >= m.degree:
            cnt = hsize * (q - 1) * q ** (d - m.degree)
            v.append({s: cnt for s in Q})
        else:
            cd: Counter = Counter()
            for f in monic_polys(ctx, d):
                if f.gcd(m).degree == 0:
                    cd[S.coset_of[G.class_of(f)]] += 1
            v.append(dict(cd))

    # w = u Z'/Z recovers weighted prime-power classes; deconvolve to primes
    w: list[dict[int, int]] = [{}]
    for d in range(1, depth + 1):
        acc: Counter = Counter({s: d * c for s, c in v[d].items()})
        for j in range(1, d):
            for s, c in _q_convolve(Q, w[j], v[d - j]).items():
                acc[s] -= c
        w.append({k: c for k, c in acc.items() if c})
    P: list[dict[int, int]] = [{}]
    for d in range(1, depth + 1):
        acc = Counter(w[d])
        for dp in range(1, d):
            if d % dp:
                continue
            for s, c in P[dp].items():
                acc[_q_pow(Q, s, d // dp)] -= dp * c
        cur = {}
        for s, c in acc.items():
            if c % d:
                raise ConsistencyError("prime counting deconvolution is not integral")
            if c:
                cur[s] = c // d
        P.append(cur)

    for dp in range(1, depth + 1):
        for s, c in P[dp].items():
            f = _q_order(Q, s)
            if dp * f <= depth:
                B[dp * f] += c * (n // f)

    N = [0] * (depth + 1)
    for i in range(1, depth + 1):
        N[i] = sum(d * B[d] for d in range(1, i + 1) if i % d == 0)

    a = [0] + [q**i + 1 - N[i] for i in range(1, depth + 1)]
    c: list[Fraction] = [Fraction(1)]
    for j in range(1, g + 1):
        s = sum(Fraction(a[i]) * c[j - i] for i in range(1, j + 1))
        c.append(-s / j)
    coeffs = [c[j] for j in range(g + 1)]
    for j in range(g - 1, -1, -1):
        coeffs.append(Fraction(q) ** (g - j) * c[j])
    numerator = []
    for x in coeffs:
        if x.denominator != 1:
            raise ConsistencyError("zeta numerator has a non-integer coefficient")
        numerator.append(int(x))

    # predict N_{g+1} from the full numerator and compare with the count
    full_a = [0] * (2 * g + 2)
    for i in range(1, 2 * g + 2):
        s = sum(numerator[j] * full_a[i - j] for j in range(1, min(i, 2 * g + 1)))
        full_a[i] = -(s + (i * numerator[i] if i <= 2 * g else 0))
    predicted = q ** (g + 1) + 1 - full_a[g + 1]
    if predicted != N[g + 1]:
        raise ConsistencyError(
            f"zeta functional equation fails the count check: {predicted} != {N[g + 1]}"
        )
    h = sum(numerator)
    if h <= 0:
        raise ConsistencyError("zeta numerator evaluates to a non-positive class number")
    return {
        "genus": g,
        "counts": [N[i] for i in range(1, g + 1)],
        "numerator": numerator,
        "h": h,
    }


# ---------------------------------------------------------------------------
# abstract abelian group decomposition and idempotents mod ell^K


def group_element_order(group, a: int) -> int:
    k = 1
    x = a
    while x != group.identity:
        x = group.mul(x, a)
        k += 1
    return k


def cyclic_decomposition(group) -> list[tuple[int, int]]:
    """(generator, order) pairs whose cyclic spans form a direct product."""
    order = getattr(group, "order")
    chosen: list[tuple[int, int]] = []
    span: dict[int, tuple[int, ...]] = {group.identity: ()}
    while len(span) < order:
        best = None
        best_k = 0
        for a in group:
            if a in span:
                continue
            x = a
            k = 1
            while x not in span:
                x = group.mul(x, a)
                k += 1
            if k > best_k:
                best, best_k = a, k
        a, k = best, best_k
        x = a
        for _ in range(k - 1):
            x = group.mul(x, a)
        exps = span[x]
        fixed = a
        for (gen, _), e in zip(chosen, exps):
            if e % k:
                raise ConsistencyError("cyclic decomposition correction failed")
            step = group.inv(gen)
            for _ in range(e // k):
                fixed = group.mul(fixed, step)
        chosen.append((fixed, k))
        new_span: dict[int, tuple[int, ...]] = {}
        for elem, exps in span.items():
            x = elem
            for e in range(k):
                new_span[x] = exps + (e,)
                x = group.mul(x, fixed)
        if len(new_span) != len(span) * k:
            raise ConsistencyError("generators do not form a direct product")
        span = new_span
    return chosen


def primary_cyclic_decomposition(group) -> list[tuple[int, int]]:
    out = []
    for gen, k in cyclic_decomposition(group):
        rest = k
        f = 2
        while f * f <= rest:
            if rest % f == 0:
                pk = 1
                while rest % f == 0:
                    pk *= f
                    rest //= f
                out.append((_group_pow(group, gen, k // pk), pk))
            f += 1
        if rest > 1:
            out.append((_group_pow(group, gen, k // rest), rest))
    return out


def _group_pow(group, a: int, k: int) -> int:
    x = group.identity
    for _ in range(k):
        x = group.mul(x, a)
    return x


# integer polynomials mod M, little-endian coefficient lists


def _ipoly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ipoly_mul(a: list[int], b: list[int], M: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % M
    return _ipoly_trim(out)


def _ipoly_sub(a: list[int], b: list[int], M: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % M
    return _ipoly_trim(out)


def _ipoly_divmod(a: list[int], b: list[int], M: int) -> tuple[list[int], list[int]]:
    """Division by a monic polynomial, coefficients mod M."""
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    r = list(a)
    qout = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] % M
        if c:
            qout[i] = c
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] - c * y) % M
    return _ipoly_trim(qout), _ipoly_trim(r[: len(b) - 1])


def _poly_to_ints(f: PolyFq) -> list[int]:
    # coefficients of a prime-field polynomial as ints, little-endian
    d = f.degree
    return [f[i] for i in range(d + 1)]


def _ints_to_poly(a: list[int], ctx: FqCtx) -> PolyFq:
    return PolyFq(ctx, [x % ctx.p for x in a])


def _hensel_pair(f: list[int], g0: PolyFq, h0: PolyFq, ell: int, K: int):
    """Lift f = g0*h0 (mod ell, coprime monic factors) to mod ell^K."""
    ctx = g0.ctx
    _, s, t = g0.xgcd(h0)
    g = _poly_to_ints(g0)
    h = _poly_to_ints(h0)
    M = ell**K
    for j in range(1, K):
        e = _ipoly_sub(f, _ipoly_mul(g, h, M), M)
        step = ell**j
        d = _ints_to_poly([(x // step) % ell for x in e], ctx)
        if d.is_zero():
            continue
        u = (t * d) % g0
        vpoly = (d - u * h0).exact_div(g0)
        for i, coef in enumerate(_poly_to_ints(u)):
            while len(g) <= i:
                g.append(0)
            g[i] = (g[i] + step * coef) % M
        for i, coef in enumerate(_poly_to_ints(vpoly)):
            while len(h) <= i:
                h.append(0)
            h[i] = (h[i] + step * coef) % M
        _ipoly_trim(g)
        _ipoly_trim(h)
    return g, h


def _hensel_factors(f: list[int], facs: list[PolyFq], ell: int, K: int) -> list[list[int]]:
    if len(facs) == 1:
        return [[x % ell**K for x in f]]
    rest = facs[1]
    for p in facs[2:]:
        rest = rest * p
    g, h = _hensel_pair(f, facs[0], rest, ell, K)
    return [g] + _hensel_factors(h, facs[1:], ell, K)


def _inverse_mod_factor(h: list[int], gfac: list[int], ell: int, K: int) -> list[int]:
    """u with u*h = 1 modulo (gfac, ell^K); Newton lift from mod ell."""
    M = ell**K
    ctx = ffield.context(ell, 1)
    gp = _ints_to_poly(gfac, ctx)
    hp = _ints_to_poly(h, ctx) % gp
    d, s, _ = hp.xgcd(gp)
    if d.degree != 0:
        raise ConsistencyError("factor inverse does not exist")
    s = s.scale(ctx.inv(d.constant()))
    u = _poly_to_ints(s)
    w = _ipoly_divmod(h, gfac, M)[1] if len(h) >= len(gfac) else list(h)
    k = 1
    while k < K:
        prod = _ipoly_mul(w, u, M)
        two_minus = _ipoly_sub([2], prod, M)
        u = _ipoly_mul(u, two_minus, M)
        if len(u) >= len(gfac):
            u = _ipoly_divmod(u, gfac, M)[1]
        k *= 2
    return u


def idempotents_mod(group, ell: int, K: int) -> list[tuple[dict[int, int], int]]:
    """Orthogonal idempotents of (Z/ell^K)[group] with their dimensions.

    Per primary cyclic component, x^N - 1 is factored over F_ell and the
    factorization Hensel-lifted; idempotents of the components are combined
    by products.
    """
    order = getattr(group, "order")
    if order % ell == 0:
        raise ValueError("ell must not divide the group order")
    M = ell**K
    ctx = ffield.context(ell, 1)
    current: list[tuple[dict[int, int], int]] = [({group.identity: 1}, 1)]
    for gen, N in primary_cyclic_decomposition(group):
        xN1 = PolyFq(ctx, [ctx.neg(1)] + [0] * (N - 1) + [1])
        facs = sorted((p for p, _ in xN1.factor()), key=lambda p: (p.degree, tuple(p.coeffs)))
        f_int = [0] * (N + 1)
        f_int[0] = M - 1
        f_int[N] = 1
        lifted = _hensel_factors(f_int, facs, ell, K)
        powers = [group.identity]
        for _ in range(N - 1):
            powers.append(group.mul(powers[-1], gen))
        comp: list[tuple[dict[int, int], int]] = []
        for gfac, gmod in zip(lifted, facs):
            cofactor, rem = _ipoly_divmod(f_int, gfac, M)
            if rem:
                raise ConsistencyError("lifted factor does not divide x^N - 1")
            u = _inverse_mod_factor(cofactor, gfac, ell, K)
            e_poly = _ipoly_mul(u, cofactor, M)
            coeffs = [0] * N
            for i, cval in enumerate(e_poly):
                coeffs[i % N] = (coeffs[i % N] + cval) % M
            ed = {powers[i]: cval for i, cval in enumerate(coeffs) if cval}
            comp.append((ed, gmod.degree))
        nxt = []
        for e1, d1 in current:
            for e2, d2 in comp:
                prod: Counter = Counter()
                for s, x in e1.items():
                    for t, y in e2.items():
                        prod[group.mul(s, t)] = (prod[group.mul(s, t)] + x * y) % M
                nxt.append(({k: v for k, v in prod.items() if v}, d1 * d2))
        current = nxt
    return current


# ---------------------------------------------------------------------------
# regulator parts, Pic_ell, and small structure computations


def _ell_split(h: int, ell: int) -> tuple[int, int]:
    hl = 1
    while h % ell == 0:
        hl *= ell
        h //= ell
    return hl, h  # (ell-part, prime-to-ell part)


def idempotent_is_trivial(idem: dict[int, int], group, M: int) -> bool:
    """Whether the idempotent is the projector onto the trivial character."""
    order = getattr(group, "order")
    vals = {idem.get(s, 0) % M for s in group}
    return len(vals) == 1 and (len(idem) == order or 0 in vals)


def regulator_chi_part(geom: Geometry, ell: int, idem: dict[int, int], h: int) -> int:
    """Smallest b >= 0 with M*ell^b*(E . inf) principal, E an integer lift."""
    hl, M = _ell_split(h, ell)
    vl = 0
    x = hl
    while x > 1:
        x //= ell
        vl += 1
    cls = geom.zero_class()
    for s, c in sorted(idem.items()):
        c %= h  # the class group has exponent dividing h
        if not c:
            continue
        cls = cls + geom.infinite_base_class(geom.G.inv(s)).scale(c)
    cls = cls.scale(M % h or h)
    for b in range(vl + 1):
        if cls.is_zero():
            return b
        cls = cls.scale(ell)
    raise ConsistencyError("regulator part exceeds the ell-part of h")


def pic_ell_cardinality(geom: Geometry, ell: int, h: int) -> int:
    """|Pic_ell(O_F)| = h_ell / prod_chi ell^(b_chi * dim chi)."""
    q = geom.ctx.q
    if ell == 0 or (q * (q - 1) * geom.n) % ell == 0:
        raise ValueError("ell must be coprime to q(q-1)[F:k]")
    hl, _ = _ell_split(h, ell)
    vl = 0
    x = hl
    while x > 1:
        x //= ell
        vl += 1
    K = vl + 1
    M = ell**K
    denom = 1
    for idem, dim in idempotents_mod(geom.G, ell, K):
        if idempotent_is_trivial(idem, geom.G, M):
            continue
        b = regulator_chi_part(geom, ell, idem, h)
        denom *= ell ** (b * dim)
    if hl % denom:
        raise ConsistencyError(
            f"regulator product ell^b does not divide the ell-part: {denom} vs {hl}"
        )
    return hl // denom


def s2_part_structure(
    geom: Geometry, ell: int, h: int, max_degree: int = 4
) -> list[int]:
    """Invariant factors of the ell-part of the class group, by enumerating
    classes of small places and reading off element orders."""
    hl, M = _ell_split(h, ell)
    if hl == 1:
        return []
    zero = geom.zero_class()
    found: list[DivisorClass] = [zero]

    def add_generator(gen: DivisorClass) -> None:
        frontier = list(found)
        while frontier:
            nxt = []
            for cls in frontier:
                cand = cls + gen
                if len(found) >= hl:
                    return
                if not any(cand == known for known in found):
                    found.append(cand)
                    nxt.append(cand)
            frontier = nxt

    gens: list[DivisorClass] = []
    for i in range(1, geom.n):
        D = Divisor.of(geom.infinite_place(i)) - Divisor.of(geom.inf0)
        gens.append(geom.class_of(D).scale(M))
    d = 1
    while d <= max_degree and len(found) < hl:
        for gen in gens:
            add_generator(gen)
            if len(found) >= hl:
                break
        gens = []
        for p in sorted(monic_polys(geom.ctx, d), key=lambda f: tuple(f.coeffs)):
            if not p.is_irreducible():
                continue
            for pl in geom.places_above(p):
                D = Divisor.of(pl) - Divisor.of(geom.inf0, pl.degree)
                gens.append(geom.class_of(D).scale(M))
        d += 1
    for gen in gens:
        if len(found) >= hl:
            break
        add_generator(gen)
    if len(found) != hl:
        raise IncompleteGeneratorsError(
            f"found only {len(found)} of {hl} classes with places of degree <= {max_degree}"
        )
    # element orders -> invariant factors of the abelian ell-group
    counts: Counter = Counter()
    for cls in found:
        o = 1
        cur = cls
        while not cur.is_zero():
            cur = cur.scale(ell)
            o *= ell
        counts[o] += 1
    kpow = [1]
    j = 1
    while kpow[-1] < hl:
        kpow.append(sum(c for o, c in counts.items() if o <= ell**j))
        j += 1
    factors = []
    for jj in range(1, len(kpow)):
        ratio = kpow[jj] // kpow[jj - 1]
        mult = 0
        while ratio > 1:
            ratio //= ell
            mult += 1
        factors.append(mult)
    out = []
    for jj, mj in enumerate(factors, start=1):
        extra = mj - (factors[jj] if jj < len(factors) else 0)
        out.extend([ell**jj] * extra)
    out.sort()
    prod = 1
    for fct in out:
        prod *= fct
    if prod != hl:
        raise ConsistencyError("invariant factors do not multiply to the ell-part")
    return out


def invariant_projection(
    ideal,
    coeff_vector: list[int],
    gamma: DivisorClass | None = None,
    geom: Geometry | None = None,
) -> tuple[int, ...]:
    """Coordinates of a group-ring multiple of gamma in the invariant
    decomposition cut out by the Smith normal form of the ideal lattice.

    When gamma and a geometry are supplied, the projection is verified by
    reconstructing the class and testing principality of the difference.
    """
    rows = ideal.lattice_rows
    n = len(coeff_vector)
    D, _, V = smith_normal_form(rows, ZZ)
    diag = [abs(D[i][i]) for i in range(n)]
    if any(d == 0 for d in diag):
        raise ConsistencyError("ideal lattice does not have full rank")
    y = [sum(coeff_vector[i] * V[i][j] for i in range(n)) for j in range(n)]
    coords = tuple(yj % dj for yj, dj in zip(y, diag))
    if gamma is not None:
        if geom is None:
            geom = gamma.geom
        Vinv = int_inverse(V)
        x_rec = [sum(coords[k] * Vinv[k][j] for k in range(n)) for j in range(n)]
        diff = {s: coeff_vector[s] - x_rec[s] for s in range(n)}
        if not geom.apply_group_ring(diff, gamma.divisor()).is_zero():
            raise ConsistencyError("invariant projection failed its principality self-check")
    return coords
