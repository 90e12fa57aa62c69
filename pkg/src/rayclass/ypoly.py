"""Dense polynomials in a second variable y with coefficients in F_q[t].

Used for Carlitz torsion polynomials Phi_m(y), minimal polynomials of field
generators, and everything that treats a function field as F_q(t)[y]/(B).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .ffield import FqCtx
from .fqpoly import PolyFq
from .laurent import LaurentSeries


class YPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqCtx, coeffs: Iterable[PolyFq]):
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @staticmethod
    def zero(ctx: FqCtx) -> "YPoly":
        return YPoly(ctx, ())

    @staticmethod
    def one(ctx: FqCtx) -> "YPoly":
        return YPoly(ctx, (PolyFq.one(ctx),))

    @staticmethod
    def y(ctx: FqCtx) -> "YPoly":
        return YPoly(ctx, (PolyFq.zero(ctx), PolyFq.one(ctx)))

    @staticmethod
    def const(p: PolyFq) -> "YPoly":
        return YPoly(p.ctx, (p,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def lead(self) -> PolyFq:
        if not self.coeffs:
            raise ValueError("zero polynomial")
        return self.coeffs[-1]

    def coeff(self, i: int) -> PolyFq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else PolyFq.zero(self.ctx)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, YPoly) and self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __add__(self, other: "YPoly") -> "YPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return YPoly(self.ctx, out)

    def __neg__(self) -> "YPoly":
        return YPoly(self.ctx, (-c for c in self.coeffs))

    def __sub__(self, other: "YPoly") -> "YPoly":
        return self + (-other)

    def __mul__(self, other: "YPoly") -> "YPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return YPoly.zero(self.ctx)
        out = [PolyFq.zero(self.ctx) for _ in range(len(a) + len(b) - 1)]
        for i, ai in enumerate(a):
            if not ai.is_zero():
                for j, bj in enumerate(b):
                    if not bj.is_zero():
                        out[i + j] = out[i + j] + ai * bj
        return YPoly(self.ctx, out)

    def scale(self, p: PolyFq) -> "YPoly":
        return YPoly(self.ctx, (c * p for c in self.coeffs))

    def __divmod__(self, other: "YPoly") -> tuple["YPoly", "YPoly"]:
        """Division for a divisor whose leading coefficient is a unit (monic up
        to constants); this is all the torsion constructions need."""
        if other.is_zero():
            raise ZeroDivisionError
        lead = other.lead()
        if lead.degree != 0:
            raise ValueError("division requires a unit leading coefficient")
        inv = PolyFq.const(self.ctx, self.ctx.inv(lead.constant()))
        db = other.degree
        rem = list(self.coeffs)
        quot = [PolyFq.zero(self.ctx)] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c.is_zero():
                c = c * inv
                quot[i - db] = c
                for j in range(db + 1):
                    rem[i - db + j] = rem[i - db + j] - c * other.coeffs[j]
        return YPoly(self.ctx, quot), YPoly(self.ctx, rem)

    def __mod__(self, other: "YPoly") -> "YPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "YPoly") -> "YPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact division of y-polynomials")
        return q

    def derivative(self) -> "YPoly":
        K = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(self.coeffs[i].scale(i % K.p))
        return YPoly(K, out)

    def qth_power_mod(self, mod: "YPoly") -> "YPoly":
        """Raise to the q-th power modulo ``mod``: coefficients c(t) -> c(t^q),
        exponents dilate by q, then reduce."""
        K = self.ctx
        q = K.q
        if self.is_zero():
            return self
        out = [PolyFq.zero(K)] * (self.degree * q + 1)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                # c(t)^q = c(t^q) since the coefficients are Frobenius-fixed
                dil = [0] * (c.degree * q + 1)
                for j, cj in enumerate(c.coeffs):
                    dil[j * q] = cj
                out[i * q] = PolyFq(K, dil)
        return YPoly(K, out) % mod

    def mul_mod(self, other: "YPoly", mod: "YPoly") -> "YPoly":
        return (self * other) % mod

    def pow_mod(self, n: int, mod: "YPoly") -> "YPoly":
        result = YPoly.one(self.ctx) % mod
        base = self % mod
        while n:
            if n & 1:
                result = result.mul_mod(base, mod)
            base = base.mul_mod(base, mod)
            n >>= 1
        return result

    def evaluate_poly(self, x: PolyFq) -> PolyFq:
        """Evaluate at y = x(t) in F_q[t]."""
        acc = PolyFq.zero(self.ctx)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_series(
        self, x: LaurentSeries, prec: int, emb: list[int] | None = None
    ) -> LaurentSeries:
        """Horner evaluation at a Laurent series argument."""
        ctx = x.ctx
        acc = LaurentSeries.zero(ctx, x.ram, prec)
        for c in reversed(self.coeffs):
            acc = acc * x + LaurentSeries.from_poly_t(c, x.ram, prec, ctx=ctx, emb=emb)
        return acc

    def series_coeffs(
        self, ram: int, prec: int, ctx: FqCtx | None = None, emb: list[int] | None = None
    ) -> dict[int, LaurentSeries]:
        return {
            j: LaurentSeries.from_poly_t(c, ram, prec, ctx=ctx, emb=emb)
            for j, c in enumerate(self.coeffs)
            if not c.is_zero()
        }

    def format(self, yvar: str = "y", tvar: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = c.format(tvar)
            if i == 0:
                parts.append(cs)
            else:
                ypart = yvar if i == 1 else f"{yvar}^{i}"
                parts.append(ypart if c.is_one() else f"({cs})*{ypart}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"YPoly({self.format()!r})"
