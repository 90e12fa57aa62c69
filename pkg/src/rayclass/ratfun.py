"""The rational function field F_q(t): reduced fractions of :class:`PolyFq`."""

from __future__ import annotations

from .ffield import FqCtx
from .fqpoly import PolyFq


class RatFun:
    __slots__ = ("num", "den")

    def __init__(self, num: PolyFq, den: PolyFq | None = None, *, reduce: bool = True):
        ctx = num.ctx
        if den is None:
            den = PolyFq.one(ctx)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if num.is_zero():
            den = PolyFq.one(ctx)
        elif not den.is_monic():
            c = ctx.inv(den.lead())
            num = num.scale(c)
            den = den.scale(c)
        self.num = num
        self.den = den

    @staticmethod
    def zero(ctx: FqCtx) -> "RatFun":
        return RatFun(PolyFq.zero(ctx))

    @staticmethod
    def one(ctx: FqCtx) -> "RatFun":
        return RatFun(PolyFq.one(ctx))

    @staticmethod
    def from_poly(p: PolyFq) -> "RatFun":
        return RatFun(p)

    @property
    def ctx(self) -> FqCtx:
        return self.num.ctx

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def as_poly(self) -> PolyFq:
        if not self.den.is_one():
            raise ValueError("rational function is not a polynomial")
        return self.num

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatFun)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other: "RatFun") -> "RatFun":
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other: "RatFun") -> "RatFun":
        return self + (-other)

    def __mul__(self, other: "RatFun") -> "RatFun":
        # cross-reduce before multiplying to keep degrees down
        a, b = self.num, other.den
        g = a.gcd(b)
        if g.degree > 0:
            a, b = a.exact_div(g), b.exact_div(g)
        c, d = other.num, self.den
        g = c.gcd(d)
        if g.degree > 0:
            c, d = c.exact_div(g), d.exact_div(g)
        return RatFun(a * c, b * d, reduce=False)

    def inv(self) -> "RatFun":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other: "RatFun") -> "RatFun":
        return self * other.inv()

    def scale(self, c: int) -> "RatFun":
        return RatFun(self.num.scale(c), self.den, reduce=False)

    def infinity_valuation(self) -> int:
        """Valuation at the infinite place (uniformizer 1/t); +inf encoded as None."""
        if self.is_zero():
            raise ValueError("zero has no finite valuation")
        return self.den.degree - self.num.degree

    def format(self, var: str = "t") -> str:
        if self.den.is_one():
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    def __repr__(self) -> str:
        return f"RatFun({self.format()!r})"
