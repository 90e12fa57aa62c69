"""The Galois group G = (F_q[t]/m)^x / F_q^x of a narrow ray class field.

Elements are canonical coset representatives: the unique monic polynomial of
least degree in each F_q^x-orbit of units mod m, ordered by degree then by
lexicographic coefficient comparison from the top.  Everything downstream
(group-ring vectors, characters, printed output) is indexed by this ordering,
which makes all results deterministic.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

from .ffield import FqCtx
from .fqpoly import PolyFq, monic_polys
from .matrices import int_inverse, snf


def _rep_key(p: PolyFq) -> tuple:
    return (p.degree, tuple(reversed(p.coeffs)))


class GaloisGroup:
    """(F_q[t]/m)^x / F_q^x with explicit element table and structure data."""

    def __init__(self, m: PolyFq):
        m = m.monic()
        if m.degree < 1:
            raise ValueError("modulus must be non-constant")
        self.ctx: FqCtx = m.ctx
        self.modulus: PolyFq = m
        reps: set[tuple[int, ...]] = set()
        for d in range(m.degree):
            for a in monic_polys(self.ctx, d):
                if a.gcd(m).degree == 0:
                    reps.add(a.coeffs)
        elems = sorted((PolyFq(self.ctx, c) for c in reps), key=_rep_key)
        self.elements: list[PolyFq] = elems
        self._index: dict[tuple[int, ...], int] = {a.coeffs: i for i, a in enumerate(elems)}
        self.order: int = len(elems)
        self.identity: int = self._index[PolyFq.one(self.ctx).coeffs]
        self._inv: list[int] | None = None
        self._structure: tuple[list[int], list[int]] | None = None
        self._dlog: list[tuple[int, ...]] | None = None

    # -- element access ----------------------------------------------------------

    def class_of(self, a: PolyFq) -> int:
        """Index of the class of a (must be coprime to the modulus)."""
        r = (a % self.modulus).monic()
        idx = self._index.get(r.coeffs)
        if idx is None:
            raise ValueError(f"{a.format()} is not a unit mod {self.modulus.format()}")
        return idx

    def rep(self, i: int) -> PolyFq:
        return self.elements[i]

    def mul(self, i: int, j: int) -> int:
        return self.class_of(self.elements[i] * self.elements[j])

    def inv(self, i: int) -> int:
        if self._inv is None:
            inv = [-1] * self.order
            for a in range(self.order):
                if inv[a] >= 0:
                    continue
                b = a
                while True:
                    c = self.mul(a, b)
                    if c == self.identity:
                        break
                    b = c
                inv[a], inv[b] = b, a
            self._inv = inv
        return self._inv[i]

    def pow(self, i: int, n: int) -> int:
        if n < 0:
            i, n = self.inv(i), -n
        acc = self.identity
        while n:
            if n & 1:
                acc = self.mul(acc, i)
            i = self.mul(i, i)
            n >>= 1
        return acc

    def element_order(self, i: int) -> int:
        n, j = 1, i
        while j != self.identity:
            j = self.mul(j, i)
            n += 1
        return n

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.order))

    # -- structure ---------------------------------------------------------------

    def _compute_structure(self) -> tuple[list[int], list[int]]:
        """Invariant-factor basis: independent generators h_i with orders
        d_1 | d_2 | ... and G the direct sum of the <h_i>.

        Found by collecting a generating set with triangular relations and
        diagonalizing the relation lattice by Smith normal form.
        """
        if self._structure is not None:
            return self._structure
        gens: list[int] = []
        rows: list[list[int]] = []
        span: dict[int, tuple[int, ...]] = {self.identity: ()}
        for g in range(self.order):
            if g in span:
                continue
            k = len(gens)
            n, p = 1, g
            while p not in span:
                p = self.mul(p, g)
                n += 1
            # relation: g^n equals the already-spanned element p
            rel = [-e for e in span[p]] + [n]
            rows = [r + [0] for r in rows]
            rows.append(rel)
            new_span: dict[int, tuple[int, ...]] = {}
            for h, vec in span.items():
                cur = h
                for j in range(n):
                    new_span[cur] = vec + (j,)
                    cur = self.mul(cur, g)
            span = new_span
            gens.append(g)
        if not gens:
            self._structure = ([], [])
            return self._structure
        D, _, V = snf(rows)
        # U*R*V = D, so with new coordinates y defined by x = y*V^{-1} the
        # relation lattice becomes the row span of D: the generator for the
        # i-th invariant factor is the image of row i of V^{-1}.
        W = int_inverse(V)
        k = len(gens)
        basis: list[int] = []
        orders: list[int] = []
        for i in range(k):
            d = D[i][i] if i < len(D) else 0
            assert d > 0, "relation lattice must have full rank for a finite group"
            if d == 1:
                continue
            h = self.identity
            for j in range(k):
                h = self.mul(h, self.pow(gens[j], W[i][j]))
            assert self.element_order(h) == d
            basis.append(h)
            orders.append(d)
        assert functools.reduce(lambda a, b: a * b, orders, 1) == self.order
        self._structure = (basis, orders)
        return self._structure

    @property
    def invariant_basis(self) -> list[int]:
        return self._compute_structure()[0]

    @property
    def invariant_orders(self) -> list[int]:
        return self._compute_structure()[1]

    @property
    def exponent(self) -> int:
        orders = self.invariant_orders
        return orders[-1] if orders else 1

    def dlog(self, i: int) -> tuple[int, ...]:
        """Exponent vector of element i on the invariant-factor basis."""
        if self._dlog is None:
            basis, orders = self._compute_structure()
            current = {self.identity: (0,) * len(basis)}
            for pos, (b, d) in enumerate(zip(basis, orders)):
                new: dict[int, tuple[int, ...]] = {}
                for h, vec in current.items():
                    cur = h
                    for e in range(d):
                        v = list(vec)
                        v[pos] = e
                        new[cur] = tuple(v)
                        cur = self.mul(cur, b)
                current = new
            assert len(current) == self.order
            self._dlog = [current[i] for i in range(self.order)]
        return self._dlog[i]

    def primary_decomposition(self) -> list[tuple[int, int]]:
        """Independent generators of prime-power order: list of
        (element index, prime power) whose cyclic spans give a direct-sum
        decomposition of G."""
        out: list[tuple[int, int]] = []
        basis, orders = self._compute_structure()
        for h, d in zip(basis, orders):
            n = d
            f = 2
            while f * f <= n:
                if n % f == 0:
                    pk = 1
                    while n % f == 0:
                        pk *= f
                        n //= f
                    out.append((self.pow(h, d // pk), pk))
                f += 1
            if n > 1:
                out.append((self.pow(h, d // n), n))
        return out

    # -- arithmetic-flavored maps --------------------------------------------------

    def artin_symbol(self, p: PolyFq) -> int:
        """Class of a monic irreducible p coprime to the modulus: the Frobenius
        of the places above p."""
        p = p.monic()
        if not p.is_irreducible():
            raise ValueError("artin symbol requires a monic irreducible")
        if p.gcd(self.modulus).degree != 0:
            raise ValueError("prime divides the modulus")
        return self.class_of(p)

    def project_to(self, other: "GaloisGroup") -> list[int]:
        """Index map for the natural surjection onto the group of a divisor
        of the modulus (restriction of Galois automorphisms)."""
        if not (self.modulus % other.modulus).is_zero():
            raise ValueError("target modulus must divide source modulus")
        return [other.class_of(self.elements[i]) for i in range(self.order)]

    def subgroup_closure(self, gens: Sequence[int]) -> list[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    x = self.mul(h, g)
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        return sorted(seen)


class SubextensionSpec:
    """A subfield F of H_m given by its Galois group H = Gal(H_m/F) <= G.

    Carries the quotient Q = G/H = Gal(F/k) with deterministic coset
    representatives (least canonical element of each coset).
    """

    def __init__(self, G: GaloisGroup, subgroup_gens: Sequence[int] = ()):
        self.G = G
        self.H: list[int] = G.subgroup_closure(subgroup_gens)
        hset = set(self.H)
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for g in range(G.order):
            if g in coset_of:
                continue
            reps.append(g)
            c = len(reps) - 1
            for h in self.H:
                coset_of[G.mul(g, h)] = c
        self.coset_reps: list[int] = reps
        self.coset_of: list[int] = [coset_of[g] for g in range(G.order)]
        self.degree: int = len(reps)  # [F:k]

    def quotient_mul(self, a: int, b: int) -> int:
        return self.coset_of[self.G.mul(self.coset_reps[a], self.coset_reps[b])]

    def is_full_field(self) -> bool:
        return len(self.H) == 1


class QuotientGroup:
    """G/H presented with the same element-index interface as GaloisGroup,
    indexed by the coset representatives of a SubextensionSpec."""

    def __init__(self, S: SubextensionSpec):
        self.S = S
        self.order: int = S.degree
        self.identity: int = S.coset_of[S.G.identity]

    def mul(self, a: int, b: int) -> int:
        return self.S.quotient_mul(a, b)

    def inv(self, a: int) -> int:
        return self.S.coset_of[self.S.G.inv(self.S.coset_reps[a])]

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.order))


def decomposition_invariants(G: GaloisGroup, p: PolyFq) -> tuple[int, int, int]:
    """(e, f, g) for a monic irreducible p in the field with group G:
    ramification index, residue degree, and number of places above p.

    For p not dividing the modulus, e = 1 and f is the order of the Artin
    symbol.  For p | m, the inertia group is the kernel of the projection to
    the group at the prime-to-p part of the modulus, and f is the order of the
    Frobenius there.
    """
    p = p.monic()
    m = G.modulus
    if p.gcd(m).degree == 0:
        f = G.element_order(G.artin_symbol(p))
        return 1, f, G.order // f
    mprime = m
    while (mprime % p).is_zero():
        mprime = mprime.exact_div(p)
    if mprime.degree == 0:
        return G.order, 1, 1
    Gp = GaloisGroup(mprime)
    e = G.order // Gp.order
    f = Gp.element_order(Gp.artin_symbol(p))
    return e, f, Gp.order // f


def subextension_full(G: GaloisGroup) -> SubextensionSpec:
    return SubextensionSpec(G, ())
