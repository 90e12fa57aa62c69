"""Stickelberger elements, characters, L-values at 0, and class numbers.

Everything is driven by one data source: the certified valuations of the
conjugates of the level-f Stark unit beta_f = -lambda_f^(q-1) at the
distinguished infinite place, where lambda_f = rho_{m/f}(lambda_m) sits inside
the one fixed series embedding of the m-torsion.  Pinning every level to the
same series embedding makes conductor-level and full-level Stickelberger data
strictly compatible (the Euler-factor identity holds exactly).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .carlitz import carlitz_rho
from .cycint import CycInt
from .cycfield import RealCycField
from .fqpoly import PolyFq
from .galois import GaloisGroup, QuotientGroup, SubextensionSpec
from .infinity import MAX_PRECISION, MIN_PRECISION, torsion_series
from .laurent import PrecisionError
from .matrices import det_int, snf


class GroupRingElement:
    """An element of Q[G] (or Z[G]) with rational coefficients indexed by the
    canonical element ordering of the group."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs: Sequence[Fraction]):
        self.group = group
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        assert len(self.coeffs) == group.order

    @staticmethod
    def zero(group) -> "GroupRingElement":
        return GroupRingElement(group, [Fraction(0)] * group.order)

    @staticmethod
    def basis(group, i: int, c=1) -> "GroupRingElement":
        v = [Fraction(0)] * group.order
        v[i] = Fraction(c)
        return GroupRingElement(group, v)

    @staticmethod
    def norm_element(group) -> "GroupRingElement":
        return GroupRingElement(group, [Fraction(1)] * group.order)

    def __add__(self, o: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.group, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    def __sub__(self, o: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.group, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group, [-a for a in self.coeffs])

    def scale(self, c) -> "GroupRingElement":
        c = Fraction(c)
        return GroupRingElement(self.group, [a * c for a in self.coeffs])

    def __mul__(self, o: "GroupRingElement") -> "GroupRingElement":
        g = self.group
        out = [Fraction(0)] * g.order
        for a, ca in enumerate(self.coeffs):
            if ca:
                for b, cb in enumerate(o.coeffs):
                    if cb:
                        out[g.mul(a, b)] += ca * cb
        return GroupRingElement(g, out)

    def translate(self, s: int) -> "GroupRingElement":
        """Left multiplication by the group element s."""
        g = self.group
        out = [Fraction(0)] * g.order
        for a, ca in enumerate(self.coeffs):
            if ca:
                out[g.mul(s, a)] = ca
        return GroupRingElement(g, out)

    def __eq__(self, o: object) -> bool:
        return (
            isinstance(o, GroupRingElement)
            and self.group is o.group
            and self.coeffs == o.coeffs
        )

    def augmentation(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("group ring element has non-integer coefficients")
        return [int(c) for c in self.coeffs]


class Character:
    """A character of G with values in the e-th roots of unity, e = exp(G),
    stored as the exponent table g -> k with value zeta_e^k."""

    __slots__ = ("G", "e", "vals", "_conductor")

    def __init__(self, G: GaloisGroup, e: int, vals: Sequence[int]):
        self.G = G
        self.e = e
        self.vals = tuple(v % e for v in vals)
        self._conductor: PolyFq | None = None

    def __eq__(self, o: object) -> bool:
        return isinstance(o, Character) and self.G is o.G and self.e == o.e and self.vals == o.vals

    def __hash__(self) -> int:
        return hash((id(self.G), self.e, self.vals))

    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.vals)

    def order(self) -> int:
        from math import gcd

        g = self.e
        for v in self.vals:
            g = gcd(g, v)
        return self.e // g if g else 1

    def mul(self, o: "Character") -> "Character":
        return Character(self.G, self.e, [a + b for a, b in zip(self.vals, o.vals)])

    def conj(self) -> "Character":
        return Character(self.G, self.e, [-a for a in self.vals])

    def value(self, g: int) -> CycInt:
        return CycInt.root_of_unity(self.e, self.vals[g])

    def is_trivial_on(self, subset: Sequence[int]) -> bool:
        return all(self.vals[h] == 0 for h in subset)

    def eval_vector(self, coeffs: Sequence[Fraction], elements: Sequence[int]) -> CycInt:
        """Sum of coeffs[i] * value(elements[i]) exactly in the cyclotomic ring."""
        acc = CycInt.zero(self.e)
        for c, g in zip(coeffs, elements):
            if c:
                acc = acc + CycInt.root_of_unity(self.e, self.vals[g]).scale(c)
        return acc

    def conductor(self) -> PolyFq:
        if self._conductor is None:
            G = self.G
            m = G.modulus
            if self.is_trivial():
                self._conductor = PolyFq.one(G.ctx)
                return self._conductor
            for d in _monic_divisors_sorted(m):
                if d.degree < 1 or d == m:
                    continue
                Gd = GaloisGroup(d)
                proj = G.project_to(Gd)
                kernel = [g for g in range(G.order) if proj[g] == Gd.identity]
                if self.is_trivial_on(kernel):
                    self._conductor = d
                    return self._conductor
            self._conductor = m
        return self._conductor


def _monic_divisors_sorted(m: PolyFq) -> list[PolyFq]:
    divs = [PolyFq.one(m.ctx)]
    for P, e in m.monic().factor():
        divs = [d * P.pow(j) for d in divs for j in range(e + 1)]
    return sorted(divs, key=lambda p: (p.degree, tuple(reversed(p.coeffs))))


def characters(G: GaloisGroup) -> list["Character"]:
    """All |G| characters, deterministically ordered, exact values as powers
    of zeta_e with e the exponent of G."""
    basis, orders = G.invariant_basis, G.invariant_orders
    e = G.exponent
    out = []
    exps = [0] * len(orders)
    while True:
        vals = []
        for g in range(G.order):
            dl = G.dlog(g)
            vals.append(sum(x * d * (e // o) for x, d, o in zip(exps, dl, orders)) % e)
        out.append(Character(G, e, vals))
        i = 0
        while i < len(orders):
            exps[i] += 1
            if exps[i] < orders[i]:
                break
            exps[i] = 0
            i += 1
        else:
            break
        if not orders:
            break
    return out


def char_conductor(theta: Character, m: PolyFq | None = None) -> PolyFq:
    return theta.conductor()


class FContext:
    """A subfield F of H_m given by the real field and a Galois subgroup,
    carrying all Stickelberger-side caches."""

    def __init__(self, F: RealCycField, subgroup_gens: Sequence[int] = ()):
        self.F = F
        self.G = F.G
        self.ctx = F.ctx
        self.modulus = F.modulus
        self.S = SubextensionSpec(self.G, subgroup_gens)
        self.Q = QuotientGroup(self.S)
        self.degree = self.S.degree  # [F:k]
        self._level_vals: dict[tuple[int, ...], list[int]] = {}
        self._level_groups: dict[tuple[int, ...], GaloisGroup] = {}
        self._theta_raw: dict[tuple[int, ...], GroupRingElement] = {}
        self._precision = MIN_PRECISION

    # -- valuation engine --------------------------------------------------------

    def level_group(self, f: PolyFq) -> GaloisGroup:
        key = f.coeffs
        if key not in self._level_groups:
            self._level_groups[key] = self.G if f == self.modulus else GaloisGroup(f)
        return self._level_groups[key]

    def level_valuations(self, f: PolyFq) -> list[int]:
        """Integer 1/t-valuations of the conjugates of beta_f at the common
        series embedding, indexed by the elements of Gal(H_f/k)."""
        key = f.coeffs
        if key in self._level_vals:
            return self._level_vals[key]
        m = self.modulus
        q = self.ctx.q
        ram = q - 1
        Gf = self.level_group(f)
        cof = m.exact_div(f)
        prec = self._precision
        while True:
            try:
                lam, big, emb = torsion_series(m, prec + m.degree + 1)
                lam_f = carlitz_rho(cof).evaluate_series(lam, lam.prec, emb=emb)
                vals = []
                for a in Gf.elements:
                    img = carlitz_rho(a).evaluate_series(lam_f, lam_f.prec, emb=emb)
                    conj = img
                    for _ in range(q - 2):
                        conj = conj * img
                    v = conj.valuation()
                    if v % ram:
                        raise ArithmeticError(
                            "conjugate valuation not integral at infinity; "
                            "the infinite place failed to split"
                        )
                    vals.append(v // ram)
                break
            except PrecisionError:
                prec *= 2
                if prec > MAX_PRECISION:
                    raise
        self._precision = max(self._precision, prec)
        self._level_vals[key] = vals
        return vals

    def distinguished(self) -> int:
        return self.F.embedding().distinguished_index

    # -- theta -------------------------------------------------------------------

    def level_quotient(self, f: PolyFq) -> tuple[GaloisGroup, SubextensionSpec, QuotientGroup]:
        Gf = self.level_group(f)
        if f == self.modulus:
            return Gf, self.S, self.Q
        proj = self.G.project_to(Gf)
        Sf = SubextensionSpec(Gf, sorted({proj[h] for h in self.S.H}))
        return Gf, Sf, QuotientGroup(Sf)

    def theta_raw(self, f: PolyFq | None = None) -> GroupRingElement:
        """The rational Stickelberger element of F_f = fixed field of H inside
        H_f, as an element of Q[Gal(F_f/k)]: Theta = (1/(q-1)) log(lambda_{f,F}).
        """
        f = self.modulus if f is None else f.monic()
        key = f.coeffs
        if key in self._theta_raw:
            return self._theta_raw[key]
        q = self.ctx.q
        Gf, Sf, Qf = self.level_quotient(f)
        vals = self.level_valuations(f)
        tau0 = Gf.class_of(self.G.rep(self.distinguished()))
        coeffs = []
        for c in range(Qf.order):
            base = Gf.mul(tau0, Gf.inv(Sf.coset_reps[c]))
            total = sum(vals[Gf.mul(base, h)] for h in Sf.H)
            coeffs.append(Fraction(total, q - 1))
        theta = GroupRingElement(Qf, coeffs)
        self._theta_raw[key] = theta
        return theta

    def theta(self, f: PolyFq | None = None) -> GroupRingElement:
        """The integral Stickelberger element: the raw element shifted by the
        unique multiple z/(q-1) of the norm element, 0 <= z < q-1, that clears
        the common fractional part of the coefficients.  Nontrivial character
        values are unchanged by the shift."""
        raw = self.theta_raw(f)
        theta, _ = _integralize(raw, self.ctx.q)
        if self.degree > 1 and not theta.is_integral():
            raise ArithmeticError("Stickelberger element failed integrality")
        return theta

    # -- character evaluations ------------------------------------------------------

    def field_characters(self) -> list[Character]:
        """Characters of G that factor through Gal(F/k)."""
        return [th for th in characters(self.G) if th.is_trivial_on(self.S.H)]

    def _eval_on_quotient(
        self, th: Character, theta: GroupRingElement, f: PolyFq, conjugate: bool
    ) -> CycInt:
        """Evaluate a character of G on an element of Q[Gal(F_f/k)]; the
        character must factor through that quotient."""
        Gf, Sf, Qf = self.level_quotient(f)
        proj = self.G.project_to(Gf) if Gf is not self.G else list(range(self.G.order))
        preimage = {}
        for g in range(self.G.order):
            x = Sf.coset_of[proj[g]]
            if x not in preimage:
                preimage[x] = g
        acc = CycInt.zero(th.e)
        for c, coeff in enumerate(theta.coeffs):
            if coeff:
                k = th.vals[preimage[c]]
                if conjugate:
                    k = -k
                acc = acc + CycInt.root_of_unity(th.e, k).scale(coeff)
        return acc

    def l_value(self, th: Character) -> CycInt:
        """L_k(0, theta-bar-convention): conjugate-character evaluation of
        Theta_F times the Euler corrections at primes dividing m but not the
        conductor.  Raises if a correction factor vanishes."""
        if th.is_trivial():
            raise ValueError("L-value at 0 is defined here only for nontrivial characters")
        if not th.is_trivial_on(self.S.H):
            raise ValueError("character does not factor through Gal(F/k)")
        val = self._eval_on_quotient(th, self.theta_raw(), self.modulus, conjugate=True)
        fcond = th.conductor()
        for P, _ in self.modulus.factor():
            if (fcond % P).is_zero():
                continue
            sym = self._symbol_value(th, P)
            factor = CycInt.one(th.e) - sym
            if factor.is_zero():
                raise ArithmeticError(
                    f"Euler correction factor vanishes at {P.format()}; "
                    "the level-m L-value is 0 and the primitive value must be "
                    "computed at conductor level"
                )
            val = val * factor.inv()
        return val

    def _symbol_value(self, th: Character, P: PolyFq) -> CycInt:
        """theta evaluated on the Artin symbol of P, through the conductor
        quotient when P divides m."""
        if P.gcd(self.modulus).degree == 0:
            return th.value(self.G.artin_symbol(P))
        fcond = th.conductor()
        Gc = self.level_group(fcond)
        proj = self.G.project_to(Gc)
        x = Gc.artin_symbol(P)
        for g in range(self.G.order):
            if proj[g] == x:
                return th.value(g)
        raise AssertionError("projection to conductor level must be surjective")

    def l_value_primitive(self, th: Character) -> CycInt:
        """L_k(0, .) computed at conductor level, where no Euler correction is
        needed; total (defined even when a level-m correction factor vanishes)."""
        if th.is_trivial():
            raise ValueError("nontrivial characters only")
        fcond = th.conductor()
        return self._eval_on_quotient(th, self.theta_raw(fcond), fcond, conjugate=True)

    # -- class number -----------------------------------------------------------------

    def class_number(self) -> int:
        """h(F) as the exact product of the primitive L-values over the
        nontrivial characters of Gal(F/k), cross-checked against the
        determinant of (q-1)Theta_F on the augmentation-zero sublattice."""
        chars = self.field_characters()
        nontrivial = [th for th in chars if not th.is_trivial()]
        if not nontrivial:
            return 1
        e = nontrivial[0].e
        prod = CycInt.one(e)
        for th in nontrivial:
            prod = prod * self.l_value_primitive(th)
        h = prod.to_rational()
        if h.denominator != 1 or h <= 0:
            raise ArithmeticError(f"character product is not a positive integer: {h}")
        h = int(h)
        self._dual_determinant_check(nontrivial, h)
        return h

    def _dual_determinant_check(self, nontrivial: list[Character], h: int) -> None:
        """|det| of multiplication by (q-1)Theta_F on the augmentation-zero
        sublattice of Z[Gal(F/k)] must equal (q-1)^(n-1) |prod ThetaBar(theta)|."""
        q = self.ctx.q
        Qg = self.Q
        n = Qg.order
        if n == 1:
            return
        theta = self.theta_raw().scale(q - 1)
        x = theta.int_coeffs()
        col = []
        for g in range(n):
            col.append([x[Qg.mul(hh, Qg.inv(g))] for hh in range(n)])
        # action on basis e_i - e_0, coordinates read off rows 1..n-1
        A = [
            [col[i][j] - col[0][j] for i in range(1, n)]
            for j in range(1, n)
        ]
        lhs = abs(det_int(A))
        e = nontrivial[0].e
        prod = CycInt.one(e)
        for th in nontrivial:
            prod = prod * self._eval_on_quotient(th, theta, self.modulus, conjugate=False)
        rhs = prod.to_rational()
        if Fraction(lhs) != abs(rhs):
            raise ArithmeticError(
                f"class number dual check failed: determinant {lhs} vs character product {rhs}"
            )

    # -- Stickelberger ideal --------------------------------------------------------

    def stickelberger_generators(self) -> "StickelbergerIdeal":
        """Z_F: for each monic f | m of positive degree the integralized
        corestriction of the level-f Stickelberger element, together with the
        norm element (q-1)*(1/(q-1)) Sum sigma."""
        q = self.ctx.q
        gens: list[GroupRingElement] = []
        for f in _monic_divisors_sorted(self.modulus):
            if f.degree < 1:
                continue
            s = self.corestricted_theta(f)
            i_s, z = _integralize(s, q)
            if not i_s.is_integral():
                raise ArithmeticError(
                    f"no integral shift exists for the level-{f.format()} generator"
                )
            gens.append(i_s)
        gens.append(GroupRingElement.norm_element(self.Q))
        return StickelbergerIdeal(self, gens)

    def corestricted_theta(self, f: PolyFq) -> GroupRingElement:
        """Cor from Q[Gal(F_f/k)] to Q[Gal(F/k)] of the level-f element: the
        coefficient of each coset is the coefficient of its restriction."""
        theta_f = self.theta_raw(f)
        Gf, Sf, Qf = self.level_quotient(f)
        proj = self.G.project_to(Gf) if Gf is not self.G else list(range(self.G.order))
        coeffs = []
        for c in range(self.Q.order):
            g = self.S.coset_reps[c]
            coeffs.append(theta_f.coeffs[Sf.coset_of[proj[g]]])
        return GroupRingElement(self.Q, coeffs)


def _integralize(raw: GroupRingElement, q: int) -> tuple[GroupRingElement, int]:
    """Subtract z/(q-1) times the norm element, 0 <= z < q-1, to clear a
    common fractional part; returns the shifted element and z."""
    fracs = {c % 1 for c in raw.coeffs}
    if len(fracs) == 1:
        frac = fracs.pop()
        z = frac * (q - 1)
        if z.denominator == 1:
            shift = GroupRingElement.norm_element(raw.group).scale(Fraction(int(z), q - 1))
            return raw - shift, int(z)
    return raw, 0


class StickelbergerIdeal:
    """The ideal I_F given by the generator set Z_F and the lattice spanned by
    all group translates of the generators."""

    def __init__(self, ctx: FContext, generators: list[GroupRingElement]):
        self.context = ctx
        self.generators = generators
        Qg = ctx.Q
        rows: list[list[int]] = []
        for z in generators:
            zc = z.int_coeffs()
            for s in range(Qg.order):
                rows.append(z.translate(s).int_coeffs())
        self.lattice_rows = rows

    def index(self) -> int:
        """[Z[G] : I_F] as the product of the invariant factors of the span."""
        return _lattice_index(self.lattice_rows)

    def smith_diagonal(self) -> list[int]:
        D, _, _ = snf(self.lattice_rows)
        n = len(self.lattice_rows[0])
        diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
        if any(d == 0 for d in diag):
            raise ValueError("Stickelberger lattice is rank-deficient")
        return diag

    def r_part_structure(self, h: int | None = None) -> tuple[int, list[int]]:
        """r = the part of the index coprime to [F:k], and the invariant
        factors of the r-torsion of Z[G]/I_F (the coprime-to-[F:k] part of
        each Smith invariant)."""
        diag = self.smith_diagonal()
        nfk = self.context.degree
        factors = []
        r = 1
        for d in diag:
            dp = _coprime_part(d, nfk)
            r *= dp
            if dp > 1:
                factors.append(dp)
        return r, sorted(factors)


def _coprime_part(d: int, n: int) -> int:
    from math import gcd

    while True:
        g = gcd(d, n)
        if g == 1:
            return d
        while d % g == 0:
            d //= g


def _lattice_index(rows: list[list[int]]) -> int:
    D, _, _ = snf(rows)
    n = len(rows[0])
    idx = 1
    for i in range(n):
        d = D[i][i] if i < len(D) and i < len(D[i]) else 0
        if d == 0:
            raise ValueError("lattice is rank-deficient")
        idx *= d
    return idx


def theta(ctx: FContext) -> GroupRingElement:
    return ctx.theta()


def class_number(ctx: FContext) -> int:
    return ctx.class_number()


def stickelberger_generators(ctx: FContext) -> StickelbergerIdeal:
    return ctx.stickelberger_generators()


def ideal_index(I: StickelbergerIdeal) -> int:
    return I.index()


def r_part_structure(I: StickelbergerIdeal, h: int) -> tuple[int, list[int]]:
    return I.r_part_structure(h)
