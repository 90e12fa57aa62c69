"""Carlitz module action and torsion polynomials over F_q[t].

The Carlitz module is the F_q[t]-module structure on any F_q[t]-algebra
defined by rho_t(y) = t*y + y^q and extended F_q-linearly and
multiplicatively: rho_{ab} = rho_a o rho_b.  The m-torsion of this module
plays the role that roots of unity play over the rationals.
"""

from __future__ import annotations

import functools
from typing import Iterable

from .ffield import FqCtx
from .fqpoly import PolyFq
from .laurent import LaurentSeries
from .ypoly import YPoly


class QPolynomial:
    """An F_q-linear (additive) polynomial sum_j c_j * y^(q^j), c_j in F_q[t].

    Stored as the dense list of q-power coefficients [c_0, c_1, ...].
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqCtx, coeffs: Iterable[PolyFq]):
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @staticmethod
    def zero(ctx: FqCtx) -> "QPolynomial":
        return QPolynomial(ctx, ())

    @staticmethod
    def identity(ctx: FqCtx) -> "QPolynomial":
        return QPolynomial(ctx, (PolyFq.one(ctx),))

    @property
    def tau_degree(self) -> int:
        """Degree as a twisted polynomial in the Frobenius tau: y -> y^q."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QPolynomial)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return QPolynomial(self.ctx, out)

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(self.ctx, (-c for c in self.coeffs))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def scale(self, p: PolyFq) -> "QPolynomial":
        return QPolynomial(self.ctx, (c * p for c in self.coeffs))

    def compose(self, other: "QPolynomial") -> "QPolynomial":
        """self(other(y)); the twisted-polynomial product with c*tau^j acting
        on a coefficient b as c * b^(q^j)."""
        K = self.ctx
        if self.is_zero() or other.is_zero():
            return QPolynomial.zero(K)
        q = K.q
        out = [PolyFq.zero(K)] * (self.tau_degree + other.tau_degree + 1)
        for i, ci in enumerate(self.coeffs):
            if ci.is_zero():
                continue
            for j, bj in enumerate(other.coeffs):
                if bj.is_zero():
                    continue
                # bj(t)^(q^i) = bj(t^(q^i)) since the base coefficients are fixed
                qi = q**i
                dil = [0] * (bj.degree * qi + 1)
                for d, c in enumerate(bj.coeffs):
                    dil[d * qi] = c
                out[i + j] = out[i + j] + ci * PolyFq(K, dil)
        return QPolynomial(K, out)

    def to_ypoly(self) -> YPoly:
        K = self.ctx
        if self.is_zero():
            return YPoly.zero(K)
        q = K.q
        out = [PolyFq.zero(K)] * (q**self.tau_degree + 1)
        for j, c in enumerate(self.coeffs):
            out[q**j] = c
        return YPoly(K, out)

    def evaluate_poly(self, x: PolyFq) -> PolyFq:
        q = self.ctx.q
        acc = PolyFq.zero(self.ctx)
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + c * x.pow(q**j)
        return acc

    def evaluate_mod(self, x: YPoly, mod: YPoly) -> YPoly:
        """Evaluate at a residue x of F_q[t][y]/(mod), exploiting additivity:
        the q-power of a residue is a Frobenius dilation, not a big product."""
        K = self.ctx
        acc = YPoly.zero(K)
        power = x % mod
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + power.scale(c)
            if j < self.tau_degree:
                power = power.qth_power_mod(mod)
        return acc % mod

    def evaluate_series(
        self, x: LaurentSeries, prec: int, emb: list[int] | None = None
    ) -> LaurentSeries:
        ctx = x.ctx
        e = self.ctx.e  # q = p^e; the series may live in an extension of F_q
        acc = LaurentSeries.zero(ctx, x.ram, prec)
        power = x
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                cs = LaurentSeries.from_poly_t(c, x.ram, power.prec, ctx=ctx, emb=emb)
                acc = acc + cs * power
            if j < self.tau_degree:
                power = power.pth_power(e)
        return acc.truncate(prec)

    def format(self, yvar: str = "y", tvar: str = "t") -> str:
        return self.to_ypoly().format(yvar, tvar)

    def __repr__(self) -> str:
        return f"QPolynomial({self.format()!r})"


@functools.cache
def _rho_cached(ctx_id: int, ctx: FqCtx, key: tuple[int, ...]) -> QPolynomial:
    a = PolyFq(ctx, key)
    if a.degree <= 0:
        return QPolynomial(ctx, (a,))
    # rho_a = rho_{a mod t} + rho_{a div t} o rho_t, peeling one power of t
    lo = PolyFq.const(ctx, a.constant())
    hi = carlitz_rho(a // PolyFq.x(ctx))
    rho_t = QPolynomial(ctx, (PolyFq.x(ctx), PolyFq.one(ctx)))
    return QPolynomial(ctx, (lo,)) + hi.compose(rho_t)


def carlitz_rho(a: PolyFq) -> QPolynomial:
    """The additive polynomial rho_a giving the Carlitz action of a."""
    return _rho_cached(id(a.ctx), a.ctx, a.coeffs)


def carlitz_action(a: PolyFq, x: YPoly, mod: YPoly) -> YPoly:
    """rho_a(x) in F_q[t][y]/(mod)."""
    return carlitz_rho(a).evaluate_mod(x, mod)


def _monic_divisors(m: PolyFq) -> list[tuple[PolyFq, int]]:
    """All monic divisors d of m together with the Moebius value mu(m/d),
    restricted to the squarefree-complement divisors where mu is nonzero."""
    factors = m.monic().factor()
    divisors = [(PolyFq.one(m.ctx), 1)]
    for P, e in factors:
        base = P.pow(e)
        below = P.pow(e - 1)
        new = []
        for d, mu in divisors:
            new.append((d * base, mu))
            new.append((d * below, -mu))
        divisors = new
    return divisors


def torsion_poly_primepower(P: PolyFq, c: int) -> YPoly:
    """The torsion polynomial for a prime power P^c:
    rho_{P^c}(y) / rho_{P^(c-1)}(y), monic of degree q^(c*deg P) - q^((c-1)*deg P).
    """
    if not P.is_monic() or not P.is_irreducible():
        raise ValueError("P must be monic irreducible")
    if c < 1:
        raise ValueError("exponent must be positive")
    num = carlitz_rho(P.pow(c)).to_ypoly()
    if c == 1:
        den = YPoly.y(P.ctx)
    else:
        den = carlitz_rho(P.pow(c - 1)).to_ypoly()
    return num.exact_div(den)


def torsion_poly(m: PolyFq) -> YPoly:
    """The polynomial whose roots are the exact m-torsion generators of the
    Carlitz module: prod over monic d | m of rho_{m/d}(y)^mu(d).  Monic of
    degree |(F_q[t]/m)^x|.
    """
    m = m.monic()
    if m.degree < 1:
        raise ValueError("modulus must be non-constant")
    num = YPoly.one(m.ctx)
    den = YPoly.one(m.ctx)
    for d, mu in _monic_divisors(m):
        if d.degree < 0:
            continue
        rho = carlitz_rho(d).to_ypoly()
        if mu == 1:
            num = num * rho
        elif mu == -1:
            den = den * rho
    return num.exact_div(den)


def unit_group_order(m: PolyFq) -> int:
    """|(F_q[t]/m)^x|."""
    q = m.ctx.q
    order = 1
    for P, e in m.monic().factor():
        Np = q**P.degree
        order *= Np ** (e - 1) * (Np - 1)
    return order


def is_torsion_generator(x: YPoly, m: PolyFq) -> bool:
    """Whether the residue x in F_q[t][y]/(torsion_poly(m)) has exact
    annihilator (m): rho_m(x) = 0 but rho_{m/P}(x) != 0 for each prime P | m.
    """
    m = m.monic()
    mod = torsion_poly(m)
    if not carlitz_action(m, x, mod).is_zero():
        return False
    for P, _ in m.factor():
        if carlitz_action(m.exact_div(P), x, mod).is_zero():
            return False
    return True
