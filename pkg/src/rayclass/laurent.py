"""Truncated Laurent series over a small finite field, at the infinite place.

A :class:`LaurentSeries` lives in F_Q((u)) where the uniformizer ``u`` satisfies
``u^ram = 1/t`` for a fixed ramification grid ``ram`` (``ram == 1`` means u = 1/t).
The known coefficient window is ``[val, prec)``; everything at exponent >= ``prec``
is unknown.  A series with an empty coefficient tuple represents "zero to precision
prec": its true valuation is only bounded below by ``prec``.  All arithmetic
propagates windows ultrametrically, so a nonzero reported valuation is certified.

The module also provides exact-to-series conversion for polynomials in t, Newton
refinement of simple roots, and a recursive Newton-polygon root finder returning
every root of a polynomial inside F_Q((u)).
"""

from __future__ import annotations

from math import comb

from .ffield import FqCtx
from .fqpoly import PolyFq


class PrecisionError(ArithmeticError):
    """Raised when a computation cannot be certified at the working precision."""


class LaurentSeries:
    __slots__ = ("ctx", "ram", "val", "coeffs", "prec")

    def __init__(self, ctx: FqCtx, ram: int, val: int, coeffs, prec: int):
        c = list(coeffs)
        # strip uncertain tail / leading zeros, keep window bookkeeping honest
        if len(c) > prec - val:
            del c[prec - val:]
        while c and c[0] == 0:
            c.pop(0)
            val += 1
        while c and c[-1] == 0:
            c.pop()
        if not c:
            val = prec
        self.ctx = ctx
        self.ram = ram
        self.val = val
        self.coeffs = tuple(c)
        self.prec = prec

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(ctx: FqCtx, ram: int, prec: int) -> "LaurentSeries":
        return LaurentSeries(ctx, ram, prec, (), prec)

    @staticmethod
    def const(ctx: FqCtx, ram: int, c: int, prec: int) -> "LaurentSeries":
        return LaurentSeries(ctx, ram, 0, (c,), prec)

    @staticmethod
    def monomial(ctx: FqCtx, ram: int, c: int, exp: int, prec: int) -> "LaurentSeries":
        return LaurentSeries(ctx, ram, exp, (c,), prec)

    @staticmethod
    def from_poly_t(
        poly: PolyFq, ram: int, prec: int, ctx: FqCtx | None = None, emb: list[int] | None = None
    ) -> "LaurentSeries":
        """Expansion of a polynomial in t: t^d contributes exponent -d*ram.

        Pass ``ctx``/``emb`` to land the coefficients in an extension field.
        """
        K = ctx or poly.ctx
        d = poly.degree
        if d < 0:
            return LaurentSeries.zero(K, ram, prec)
        coeffs = [0] * (d * ram + 1)
        for i, c in enumerate(poly.coeffs):
            coeffs[(d - i) * ram] = emb[c] if emb is not None else c
        return LaurentSeries(K, ram, -d * ram, coeffs, prec)

    # -- inspection ------------------------------------------------------------

    def is_zero_window(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise PrecisionError(f"series is zero to precision {self.prec}; valuation unknown")
        return self.val

    def coeff(self, i: int) -> int:
        if i >= self.prec:
            raise PrecisionError(f"coefficient at {i} beyond precision {self.prec}")
        if i < self.val or i - self.val >= len(self.coeffs):
            return 0
        return self.coeffs[i - self.val]

    def leading(self) -> tuple[int, int]:
        return self.valuation(), self.coeffs[0]

    def nterms(self) -> int:
        return self.prec - self.val

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        K = self.ctx
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val)
        if lo >= prec:
            return LaurentSeries.zero(K, self.ram, prec)
        out = [0] * (prec - lo)
        for i, c in enumerate(self.coeffs):
            j = self.val + i - lo
            if j < len(out):
                out[j] = c
        add = K.add
        for i, c in enumerate(other.coeffs):
            j = other.val + i - lo
            if j < len(out):
                out[j] = add(out[j], c)
        return LaurentSeries(K, self.ram, lo, out, prec)

    def __neg__(self) -> "LaurentSeries":
        K = self.ctx
        return LaurentSeries(
            K, self.ram, self.val, (K.neg(c) for c in self.coeffs), self.prec
        )

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        K = self.ctx
        if not self.coeffs or not other.coeffs:
            # v(ab) >= bound(a) + bound(b); for the zero-window factor the bound
            # is its prec, for the other its val
            prec = min(
                self.prec + (other.val if other.coeffs else other.prec),
                other.prec + (self.val if self.coeffs else self.prec),
            )
            return LaurentSeries.zero(K, self.ram, prec)
        prec = min(self.val + other.prec, other.val + self.prec)
        lo = self.val + other.val
        n = prec - lo
        out = [0] * n
        add, mul = K.add, K.mul
        for i, a in enumerate(self.coeffs):
            if a and i < n:
                lim = min(len(other.coeffs), n - i)
                for j in range(lim):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = add(out[i + j], mul(a, b))
        return LaurentSeries(K, self.ram, lo, out, prec)

    def scale(self, c: int) -> "LaurentSeries":
        K = self.ctx
        if c == 0:
            return LaurentSeries.zero(K, self.ram, self.prec)
        return LaurentSeries(K, self.ram, self.val, (K.mul(c, a) for a in self.coeffs), self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u^k."""
        return LaurentSeries(self.ctx, self.ram, self.val + k, self.coeffs, self.prec + k)

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.ctx, self.ram, self.val, self.coeffs, prec)

    def inv(self) -> "LaurentSeries":
        K = self.ctx
        if not self.coeffs:
            raise PrecisionError("cannot invert a series that is zero to precision")
        n = self.nterms()
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        inv0 = K.inv(a[0])
        out = [inv0] + [0] * (n - 1)
        sub, mul = K.sub, K.mul
        for i in range(1, n):
            s = 0
            for j in range(1, i + 1):
                if a[j] and out[i - j]:
                    s = K.add(s, mul(a[j], out[i - j]))
            out[i] = K.neg(mul(inv0, s))
        return LaurentSeries(K, self.ram, -self.val, out, -self.val + n)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inv()

    def pth_power(self, j: int) -> "LaurentSeries":
        """Raise to the p^j-th power (coefficientwise Frobenius + exponent dilation).

        Because every intermediate exponent is known to carry coefficient zero,
        the known window actually lengthens.
        """
        K = self.ctx
        P = K.p**j
        if not self.coeffs:
            return LaurentSeries.zero(K, self.ram, self.prec * P if self.prec >= 0 else self.prec * P)
        out = [0] * ((len(self.coeffs) - 1) * P + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                x = c
                for _ in range(j):
                    x = K.frob(x)
                out[i * P] = x
        # exponents >= P*(prec-1)+1 are unknown
        return LaurentSeries(K, self.ram, self.val * P, out, (self.prec - 1) * P + 1)

    def qth_power(self, steps: int = 1) -> "LaurentSeries":
        """Raise to the q0^steps power where q0 = p^e of a base field; here the
        context's own q is used (c -> c^q fixes the base subfield)."""
        return self.pth_power(self.ctx.e * steps)

    def pow(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inv().pow(-n)
        if n == 0:
            return LaurentSeries.const(self.ctx, self.ram, 1, self.nterms())
        acc = None
        base = self
        while n:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    # -- grid / field conversions -------------------------------------------------

    def map_coeffs(self, table: list[int], ctx: FqCtx) -> "LaurentSeries":
        return LaurentSeries(ctx, self.ram, self.val, (table[c] for c in self.coeffs), self.prec)

    def descend_coeffs(self, table: list[int], small: FqCtx) -> "LaurentSeries":
        """Inverse of :meth:`map_coeffs` for an embedding table small -> self.ctx."""
        back = {v: i for i, v in enumerate(table)}
        try:
            return LaurentSeries(small, self.ram, self.val, (back[c] for c in self.coeffs), self.prec)
        except KeyError:
            raise ValueError("series coefficients do not lie in the subfield")

    def change_grid(self, r: int) -> "LaurentSeries":
        """Reinterpret on a coarser grid: keep only exponents divisible by r.

        Every known nonzero coefficient must sit at a multiple of r.
        """
        for i, c in enumerate(self.coeffs):
            if c and (self.val + i) % r:
                raise ValueError("series does not live on the coarser exponent grid")
        if not self.coeffs:
            return LaurentSeries.zero(self.ctx, self.ram // r, -(-self.prec // r))
        out = [self.coeffs[i] for i in range(0, len(self.coeffs), r) if True]
        # val divisible by r by the check above (coeffs[0] != 0)
        new_coeffs = []
        for i in range(0, len(self.coeffs), r):
            new_coeffs.append(self.coeffs[i])
        return LaurentSeries(
            self.ctx, self.ram // r, self.val // r, new_coeffs, -(-self.prec // r)
        )

    def refine_grid(self, r: int) -> "LaurentSeries":
        """Move to a grid r times finer (u -> u^(1/r) exponent dilation)."""
        if not self.coeffs:
            return LaurentSeries.zero(self.ctx, self.ram * r, self.prec * r)
        out = [0] * ((len(self.coeffs) - 1) * r + 1)
        for i, c in enumerate(self.coeffs):
            out[i * r] = c
        return LaurentSeries(self.ctx, self.ram * r, self.val * r, out, (self.prec - 1) * r + 1)

    # -- formatting ----------------------------------------------------------------

    def format(self, var: str = "u", max_terms: int = 12) -> str:
        if not self.coeffs:
            return f"O({var}^{self.prec})"
        parts = []
        for i, c in enumerate(self.coeffs[:max_terms]):
            if c:
                e = self.val + i
                parts.append(f"{self.ctx.fmt(c)}*{var}^{e}")
        if len(self.coeffs) > max_terms:
            parts.append("...")
        parts.append(f"O({var}^{self.prec})")
        return " + ".join(parts)

    def stream(self, length: int) -> tuple[int, ...]:
        """The coefficient stream (c_val, c_val+1, ...) of given length, for
        canonical lexicographic comparisons between embeddings."""
        if self.prec - self.val < length and not self.coeffs:
            raise PrecisionError("stream request beyond known window")
        out = []
        for i in range(length):
            out.append(self.coeff(self.val + i))
        return tuple(out)

    def __repr__(self) -> str:
        return f"LaurentSeries({self.format()})"


# ---------------------------------------------------------------------------
# polynomials with series coefficients
# ---------------------------------------------------------------------------


def eval_series_poly(coeffs: dict[int, LaurentSeries], x: LaurentSeries) -> LaurentSeries:
    """Evaluate sum_j a_j y^j at y = x; ``coeffs`` maps exponent -> series.

    Exponents that are powers of p are computed by Frobenius dilation, which keeps
    the q-sparse additive polynomials of Carlitz theory cheap.
    """
    K = x.ctx
    total = None
    for j in sorted(coeffs):
        a = coeffs[j]
        if j == 0:
            term = a
        else:
            term = _power_of(x, j) * a if not _is_one(a) else _power_of(x, j)
        total = term if total is None else total + term
    assert total is not None
    return total


def _is_one(a: LaurentSeries) -> bool:
    return a.val == 0 and a.coeffs == (1,)


def _power_of(x: LaurentSeries, j: int) -> LaurentSeries:
    p = x.ctx.p
    # split j = p^k * m and use dilation for the p-power part
    k = 0
    while j % p == 0:
        j //= p
        k += 1
    base = x.pth_power(k) if k else x
    return base.pow(j) if j > 1 else base


def derivative_coeffs(coeffs: dict[int, LaurentSeries]) -> dict[int, LaurentSeries]:
    out: dict[int, LaurentSeries] = {}
    for j, a in coeffs.items():
        if j == 0:
            continue
        ctx = a.ctx
        c = j % ctx.p
        if c:
            out[j - 1] = a.scale(c)
    return out


# ---------------------------------------------------------------------------
# Newton refinement and the recursive root finder
# ---------------------------------------------------------------------------


def newton_refine(
    coeffs: dict[int, LaurentSeries],
    x: LaurentSeries,
    target: int,
    max_iter: int = 80,
) -> LaurentSeries:
    """Refine a simple-root approximation until certified to exponent ``target``.

    Certification is the ultrametric Newton bound: with m = v(f(x)) and
    d = v(f'(x)), a true root lies within u^(m-d) of x.  Raises
    :class:`PrecisionError` when the Hensel condition m > 2d cannot be met.
    """
    dcoeffs = derivative_coeffs(coeffs)
    for _ in range(max_iter):
        fx = eval_series_poly(coeffs, x)
        dfx = eval_series_poly(dcoeffs, x)
        d = dfx.valuation()  # raises if derivative indistinct from zero
        m = fx.prec if fx.is_zero_window() else fx.val
        if m - d >= target:
            if x.is_zero_window():
                return LaurentSeries.zero(x.ctx, x.ram, m - d)
            return x.truncate(min(x.prec, m - d))
        if fx.is_zero_window():
            raise PrecisionError(
                f"residual zero to precision {fx.prec}; cannot certify target {target}"
            )
        if m <= 2 * d:
            raise PrecisionError(
                f"Newton refinement stalled: v(f)={m} <= 2*v(f')={2*d}"
            )
        step = fx * dfx.inv()
        x = x - step
    raise PrecisionError("Newton refinement did not converge")


def laurent_newton_root(
    fpolys: list[PolyFq], seed: LaurentSeries, target: int, ram: int = 1
) -> LaurentSeries:
    """Refine ``seed`` to a root of sum_j fpolys[j]*y^j, certified to ``target``.

    The polynomial coefficients live in F_q[t] and are expanded on the seed's grid
    and coefficient field.
    """
    K = seed.ctx
    small = fpolys_ctx(fpolys)
    if K is small:
        emb = None
    else:
        _, emb = _embedding_into(small, K)
    work = target + max(8, 2 * ram)
    coeffs = {
        j: LaurentSeries.from_poly_t(p, seed.ram, work, ctx=K, emb=emb)
        for j, p in enumerate(fpolys)
        if not p.is_zero()
    }
    # treat the seed digits as exact: Newton corrects the widened zeros and the
    # final ultrametric certificate is honest either way
    wide = LaurentSeries(K, seed.ram, seed.val, seed.coeffs, work)
    return newton_refine(coeffs, wide, target)


def fpolys_ctx(fpolys: list[PolyFq]) -> FqCtx:
    for p in fpolys:
        return p.ctx
    raise ValueError("empty polynomial")


def _embedding_into(small: FqCtx, big: FqCtx) -> tuple[FqCtx, list[int]]:
    if small is big:
        return big, list(range(small.q))
    s = big.e // small.e
    ext, table = small.extension(s)
    if ext is not big:
        raise ValueError("coefficient fields are incompatible")
    return ext, table


def newton_polygon(points: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Lower convex hull of (j, v_j): returns segments (j1, j2, rise) with
    j1 < j2 consecutive hull vertices and rise = v_{j2} - v_{j1}."""
    pts = sorted(points)
    hull: list[tuple[int, int]] = []
    for j, v in pts:
        while len(hull) >= 2:
            (j1, v1), (j2, v2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies above segment hull[-2] -> (j,v)
            if (v2 - v1) * (j - j1) >= (v - v1) * (j2 - j1):
                hull.pop()
            else:
                break
        if len(hull) == 1 and hull[0][0] == j:
            if v < hull[0][1]:
                hull[0] = (j, v)
            continue
        hull.append((j, v))
    segments = []
    for a, b in zip(hull, hull[1:]):
        segments.append((a[0], b[0], b[1] - a[1]))
    return segments


def series_roots(
    coeffs: dict[int, LaurentSeries],
    target: int,
    one_root: bool = False,
    _depth: int = 0,
) -> list[LaurentSeries]:
    """All roots of sum a_j y^j inside F_Q((u)), certified to exponent ``target``.

    Roots whose leading behaviour is not on the integer exponent grid (with a
    leading coefficient in F_Q) are silently absent; callers that expect a full
    set of roots check the count.  Roots equal to zero require an exactly-zero
    constant coefficient and are returned as zero windows.
    """
    if _depth > 40:
        raise PrecisionError("root recursion too deep (roots not separable at grid)")
    ctx = next(iter(coeffs.values())).ctx
    ram = next(iter(coeffs.values())).ram
    roots: list[LaurentSeries] = []
    nz = {j: a for j, a in coeffs.items() if not a.is_zero_window()}
    if not nz:
        raise PrecisionError("all coefficients are zero windows")
    jmin = min(nz)
    if jmin > 0:
        # y = 0 is a root of multiplicity jmin; missing low coefficients are
        # exactly zero, zero windows certify vanishing only up to their precision
        low_precs = [a.prec for j, a in coeffs.items() if j < jmin]
        zero_prec = min(low_precs) if low_precs else target
        roots.extend([LaurentSeries.zero(ctx, ram, max(zero_prec, target))] * jmin)
        if one_root:
            return roots[:1]
    segments = newton_polygon([(j, a.val) for j, a in nz.items()])
    for j1, j2, rise in segments:
        mult = j2 - j1
        # roots on this segment have valuation s with v(a_j1)+j1*s = v(a_j2)+j2*s
        if rise % mult:
            continue  # fractional slope: no roots on the integer grid
        s = -rise // mult
        v1 = nz[j1].val
        R: list[int] = [0] * (mult + 1)
        for j in range(j1, j2 + 1):
            a = nz.get(j)
            if a is not None and a.val == v1 - (j - j1) * s:
                R[j - j1] = a.coeffs[0]
        Rp = PolyFq(ctx, R)
        for c in Rp.roots():
            if c == 0:
                continue
            x_minus = PolyFq(ctx, (ctx.neg(c), 1))
            mc = 0
            g = Rp
            while True:
                q_, r_ = divmod(g, x_minus)
                if r_.is_zero():
                    mc += 1
                    g = q_
                else:
                    break
            seed = LaurentSeries.monomial(ctx, ram, c, s, target + abs(s) + 8)
            if mc == 1:
                try:
                    roots.append(newton_refine(coeffs, seed, target))
                except PrecisionError:
                    # Hensel condition not yet met at the bare seed: peel more
                    # digits through the substitution recursion instead
                    sub = _substitute(coeffs, c, s)
                    for z in _positive_roots(sub, max(target - s, 1), _depth):
                        roots.append(seed + z.shift(s))
                        break
            else:
                # substitute y = u^s*(c + z) and recurse for roots z with v(z) > 0
                sub = _substitute(coeffs, c, s)
                for z in _positive_roots(sub, max(target - s, 1), _depth):
                    roots.append(seed + z.shift(s))
            if one_root and roots:
                return roots[:1]
    return roots


def _positive_roots(
    sub: dict[int, LaurentSeries], target: int, depth: int
) -> list[LaurentSeries]:
    """Roots of the substituted polynomial with strictly positive valuation."""
    out = []
    for z in series_roots(sub, target, False, depth + 1):
        if z.is_zero_window():
            if z.prec > 0:
                out.append(z)
        elif z.val > 0:
            out.append(z)
    return out


def _substitute(
    coeffs: dict[int, LaurentSeries], c: int, s: int
) -> dict[int, LaurentSeries]:
    """Coefficients of g(z) = f(u^s * (c + z)), normalized by dividing out the
    minimal valuation so the Newton data stays balanced."""
    ctx = next(iter(coeffs.values())).ctx
    ram = next(iter(coeffs.values())).ram
    p = ctx.p
    n = max(coeffs)
    out: dict[int, LaurentSeries] = {}
    cpow = [1] * (n + 1)
    for i in range(1, n + 1):
        cpow[i] = ctx.mul(cpow[i - 1], c)
    for j, a in coeffs.items():
        base = a.shift(s * j)
        for k in range(0, j + 1):
            coef = ctx.mul(comb(j, k) % p, cpow[j - k])
            if coef == 0:
                continue
            term = base.scale(coef)
            out[k] = term if k not in out else out[k] + term
    # renormalize: divide all coefficients by u^m where m = min valuation bound
    m = min((t.val if t.coeffs else t.prec) for t in out.values())
    return {k: t.shift(-m) for k, t in out.items()}
