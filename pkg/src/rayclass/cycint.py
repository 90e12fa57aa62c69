"""Exact arithmetic in cyclotomic fields Q(zeta_n) on the power basis of Phi_n.

Coordinates are :class:`fractions.Fraction`.  Only tiny orders appear here (the
exponent of a ray class group, at most a few dozen), so dense schoolbook products
with reduction modulo the integer cyclotomic polynomial are plenty fast and keep
everything exact.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from math import gcd


@functools.cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (little-endian, monic) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    # divide x^n - 1 by all Phi_d, d | n, d < n (exact integer division)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) - len(b) + 1)
    a = list(a)
    for i in range(len(a) - 1, len(b) - 2, -1):
        c = a[i]
        if c:
            assert b[-1] == 1
            out[i - len(b) + 1] = c
            for j in range(len(b)):
                a[i - len(b) + 1 + j] -= c * b[j]
    assert all(x == 0 for x in a), "inexact cyclotomic division"
    return out


class CycInt:
    """An element of Q(zeta_n), stored on the power basis 1, z, ..., z^(phi(n)-1)."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords):
        phi = len(cyclotomic_polynomial(n)) - 1
        c = [Fraction(x) for x in coords]
        if len(c) > phi:
            c = _reduce(c, n)
        c += [Fraction(0)] * (phi - len(c))
        self.n = n
        self.coords = tuple(c)

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "CycInt":
        return CycInt(n, ())

    @staticmethod
    def one(n: int) -> "CycInt":
        return CycInt(n, (1,))

    @staticmethod
    def rational(n: int, a) -> "CycInt":
        return CycInt(n, (Fraction(a),))

    @staticmethod
    def root_of_unity(n: int, k: int) -> "CycInt":
        """zeta_n^k."""
        k %= n
        return CycInt(n, (0,) * k + (1,))

    # -- predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("cyclotomic element is not rational")
        return self.coords[0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycInt) and self.n == other.n and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.n, self.coords))

    # -- ring operations ------------------------------------------------------------

    def __add__(self, other: "CycInt") -> "CycInt":
        assert self.n == other.n
        return CycInt(self.n, (a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.n, (-a for a in self.coords))

    def __sub__(self, other: "CycInt") -> "CycInt":
        return self + (-other)

    def __mul__(self, other: "CycInt") -> "CycInt":
        assert self.n == other.n
        a, b = self.coords, other.coords
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return CycInt(self.n, _reduce(out, self.n))

    def scale(self, a) -> "CycInt":
        f = Fraction(a)
        return CycInt(self.n, (f * c for c in self.coords))

    def galois(self, k: int) -> "CycInt":
        """The automorphism zeta -> zeta^k, gcd(k, n) = 1."""
        if gcd(k, self.n) != 1:
            raise ValueError("galois exponent not coprime to the order")
        out = [Fraction(0)] * self.n
        for i, c in enumerate(self.coords):
            if c:
                out[(i * k) % self.n] += c
        return CycInt(self.n, _reduce(out, self.n))

    def conj(self) -> "CycInt":
        """Complex conjugation zeta -> zeta^(-1)."""
        return self.galois(self.n - 1) if self.n > 1 else self

    def norm(self) -> Fraction:
        """The rational norm: product over all Galois conjugates."""
        prod = CycInt.one(self.n)
        for k in range(1, self.n + 1):
            if gcd(k, self.n) == 1:
                prod = prod * self.galois(k)
        return prod.to_rational()

    def inv(self) -> "CycInt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        cof = CycInt.one(self.n)
        for k in range(2, self.n + 1):
            if gcd(k, self.n) == 1:
                cof = cof * self.galois(k)
        n = (self * cof).to_rational()
        return cof.scale(Fraction(1, 1) / n)

    def __truediv__(self, other: "CycInt") -> "CycInt":
        return self * other.inv()

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}*z^{i}" if i else str(c))
        return f"CycInt(n={self.n}, {' + '.join(terms) or '0'})"


def _reduce(coords: list[Fraction], n: int) -> list[Fraction]:
    phi_n = cyclotomic_polynomial(n)
    d = len(phi_n) - 1
    out = [Fraction(x) for x in coords]
    for i in range(len(out) - 1, d - 1, -1):
        c = out[i]
        if c:
            out[i] = Fraction(0)
            for j in range(d):
                out[i - d + j] -= c * phi_n[j]
    return out[:d]
