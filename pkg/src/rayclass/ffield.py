"""Arithmetic contexts for small finite fields F_q, q = p^e.

Field elements are plain Python ints in ``[0, q)``: the integer ``n`` with base-p
digits ``(c_0, c_1, ...)`` encodes the residue ``c_0 + c_1*u + c_2*u^2 + ...`` where
``u`` is the class of the variable modulo the defining polynomial.  Encoding zero as
the int 0 and one as the int 1 keeps polynomial code over any F_q free of wrapper
objects.

A context precomputes exp/log tables with respect to a fixed multiplicative
generator, so products, inverses and powers are table lookups.  This caps the
supported field size (``MAX_Q``), which is ample for the intended ranges.
"""

from __future__ import annotations

import functools

MAX_Q = 1 << 16
ADD_TABLE_MAX = 1 << 10  # largest q given a dense addition table

# ---------------------------------------------------------------------------
# bootstrap helpers: dense little-endian coefficient lists over the prime field
# ---------------------------------------------------------------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymulmod_p(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce modulo the monic polynomial `mod`
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(dm):
                out[i - dm + j] = (out[i - dm + j] - c * mod[j]) % p
    return _trim(out)


def _polypowmod_p(a: list[int], n: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while n:
        if n & 1:
            result = _polymulmod_p(result, base, mod, p)
        base = _polymulmod_p(base, base, mod, p)
        n >>= 1
    return result


def _polygcd_p(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        # a mod b
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            c = (r[-1] * inv_lead) % p
            shift = len(r) - 1 - db
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            _trim(r)
        a, b = b, r
    return a


def _is_irreducible_p(f: list[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p (Rabin's test)."""
    e = len(f) - 1
    if e <= 0:
        return False
    x = [0, 1]
    if _polypowmod_p(x, p**e, f, p) != x:
        return False
    for ell in _prime_factors(e):
        h = _polypowmod_p(x, p ** (e // ell), f, p)
        # gcd(h - x, f) must be 1
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_polygcd_p(f, _trim(diff), p)) - 1 != 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out: list[int] = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree e over F_p.

    Candidates are ordered by the coefficient vector read from the highest
    non-leading coefficient down to the constant term.
    """
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        # digits of `code`, most significant digit = coefficient of x^(e-1)
        coeffs = [0] * e
        c = code
        for i in range(e - 1, -1, -1):
            coeffs[i] = c % p
            c //= p
        f = coeffs + [1]
        if _is_irreducible_p(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# the context
# ---------------------------------------------------------------------------


class FqCtx:
    """Tables and operations for one finite field F_q.

    Instances are interned via :func:`context`; identity comparison is safe.
    """

    __slots__ = (
        "p", "e", "q", "modulus", "generator", "exp", "log", "_add", "_neg",
        "_frob", "_sub_embeddings",
    )

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        q = p**e
        if q > MAX_Q:
            raise ValueError(f"field size {q} exceeds supported bound {MAX_Q}")
        self.p = p
        self.e = e
        self.q = q
        if modulus is None:
            modulus = _least_irreducible(p, e)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree e")
        if not _is_irreducible_p(list(modulus), p) and e > 1:
            raise ValueError("defining polynomial is reducible")
        self.modulus = tuple(modulus)
        self._build_tables()
        self._sub_embeddings: dict[int, tuple[FqCtx, list[int]]] = {}

    # -- encoding -----------------------------------------------------------

    def to_digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, digits: list[int]) -> int:
        a = 0
        for c in reversed(digits):
            a = a * self.p + c % self.p
        return a

    # -- table construction ---------------------------------------------------

    def _build_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        mod = list(self.modulus)
        neg = [(-a) % p for a in range(p)]
        if e == 1:
            self._neg = neg
            self._add = None
            self._frob = list(range(q))  # x^p = x in F_p
        else:
            self._neg = [self.from_digits([(-c) % p for c in self.to_digits(a)]) for a in range(q)]
            if q > ADD_TABLE_MAX:
                self._add = None  # digitwise addition on demand for big fields
            else:
                self._add = [0] * (q * q)
                digs = [self.to_digits(a) for a in range(q)]
                for a in range(q):
                    da = digs[a]
                    row = a * q
                    for b in range(a, q):
                        db = digs[b]
                        s = self.from_digits([(x + y) % p for x, y in zip(da, db)])
                        self._add[row + b] = s
                        self._add[b * q + a] = s
        # multiplicative generator and exp/log tables
        factors = _prime_factors(q - 1) if q > 2 else []
        gen = None
        for cand in range(2 if e == 1 else p, q):
            if q == 2:
                gen = 1
                break
            if all(self._pow_slow(cand, (q - 1) // f, mod) != 1 for f in factors):
                gen = cand
                break
        if gen is None:
            for cand in range(1, q):
                if all(self._pow_slow(cand, (q - 1) // f, mod) != 1 for f in factors):
                    gen = cand
                    break
        assert gen is not None
        self.generator = gen
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._mul_slow(exp[i - 1], gen, mod)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self.exp = exp
        self.log = log
        if e > 1:
            self._frob = [self._pow_slow(a, p, mod) for a in range(q)]

    def _mul_slow(self, a: int, b: int, mod: list[int]) -> int:
        if self.e == 1:
            return (a * b) % self.p
        return self.from_digits(
            _polymulmod_p(self.to_digits(a), self.to_digits(b), mod, self.p) + [0] * self.e
        )

    def _pow_slow(self, a: int, n: int, mod: list[int]) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._mul_slow(r, a, mod)
            a = self._mul_slow(a, a, mod)
            n >>= 1
        return r

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add is None:
            if self.p == 2:
                return a ^ b
            return self.from_digits(
                [(x + y) % self.p for x, y in zip(self.to_digits(a), self.to_digits(b))]
            )
        return self._add[a * self.q + b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero in F_q")
            return 0 if n else 1
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def frob(self, a: int) -> int:
        """The absolute Frobenius a -> a^p."""
        return self._frob[a]

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        la = self.log[a]
        from math import gcd

        return (self.q - 1) // gcd(la, self.q - 1)

    # -- subfield embedding ---------------------------------------------------

    def extension(self, s: int) -> tuple["FqCtx", list[int]]:
        """The field F_{q^s} together with the embedding table F_q -> F_{q^s}.

        The embedding sends the power-basis generator of F_q to the least root
        (in the integer encoding) of F_q's defining polynomial inside F_{q^s},
        so repeated calls are deterministic.
        """
        if s in self._sub_embeddings:
            return self._sub_embeddings[s]
        if s == 1:
            res = (self, list(range(self.q)))
            self._sub_embeddings[s] = res
            return res
        big = context(self.p, self.e * s)
        if self.e == 1:
            table = [a % self.p for a in range(self.q)]
        else:
            root = None
            for cand in range(big.q):
                acc = 0
                # evaluate our defining polynomial at cand inside `big`
                for c in reversed(self.modulus):
                    acc = big.add(big.mul(acc, cand), c % self.p)
                if acc == 0:
                    root = cand
                    break
            assert root is not None
            table = [0] * self.q
            for a in range(self.q):
                acc = 0
                for c in reversed(self.to_digits(a)):
                    acc = big.add(big.mul(acc, root), c % self.p)
                table[a] = acc
        res = (big, table)
        self._sub_embeddings[s] = res
        return res

    # -- formatting -----------------------------------------------------------

    def fmt(self, a: int) -> str:
        """Render one element: a decimal digit for prime fields, ``g^k`` otherwise."""
        if self.e == 1:
            return str(a)
        if a == 0:
            return "0"
        if a == 1:
            return "1"
        return f"g^{self.log[a]}"

    def parse(self, text: str) -> int:
        text = text.strip()
        if self.e == 1:
            v = int(text)
            if not 0 <= v < self.q:
                raise ValueError(f"coefficient {text} out of range for F_{self.q}")
            return v
        if text == "0":
            return 0
        if text == "1":
            return 1
        if text.startswith("g^"):
            return self.exp[int(text[2:]) % (self.q - 1)]
        if text == "g":
            return self.generator
        raise ValueError(f"cannot parse F_{self.q} element {text!r}")

    def __repr__(self) -> str:
        return f"FqCtx(q={self.q})"


@functools.cache
def _context_cached(p: int, e: int) -> FqCtx:
    return FqCtx(p, e)


def context(p: int, e: int = 1) -> FqCtx:
    """Interned context for F_{p^e} with the canonical defining polynomial."""
    return _context_cached(p, e)


def context_for_q(q: int) -> FqCtx:
    """Context for F_q given the prime power q."""
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                break
            return context(p, e)
    raise ValueError(f"{q} is not a prime power")
