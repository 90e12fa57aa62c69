"""Embeddings of narrow ray class fields into F_q((1/t)) at infinity.

A torsion generator lambda for the modulus m is built as a Laurent-Puiseux
series over an extension of F_q on the exponent grid u = t^(-1/(q-1)); the
conjugates of beta = -lambda^(q-1) descend to honest series in F_q((1/t)),
one per element of G -- the infinite place splits completely in H_m/k.
"""

from __future__ import annotations

from .carlitz import carlitz_rho, torsion_poly_primepower
from .ffield import FqCtx
from .fqpoly import PolyFq
from .laurent import LaurentSeries, PrecisionError, series_roots
from .galois import GaloisGroup

MIN_PRECISION = 16
MAX_PRECISION = 1 << 16


def torsion_series(m: PolyFq, prec: int) -> tuple[LaurentSeries, FqCtx, list[int]]:
    """A torsion generator for m as a series root, to ``prec`` known terms in
    1/t.

    Returns (series, big_ctx, embedding) where the series lives over
    F_{q^(q-1)} on the ram = q-1 grid and ``embedding`` maps F_q coefficients
    into the big field.  One exact generator per prime power is found from its
    torsion polynomial; their sum generates the full m-torsion.
    """
    K = m.ctx
    q = K.q
    ram = q - 1
    big, emb = K.extension(ram if ram > 1 else 1)
    target = prec * ram
    total = LaurentSeries.zero(big, ram, target)
    for P, c in m.monic().factor():
        phi = torsion_poly_primepower(P, c)
        coeffs = phi.series_coeffs(ram, target, ctx=big, emb=emb)
        roots = series_roots(coeffs, target, one_root=True)
        if not roots:
            raise PrecisionError(
                f"no series torsion root found for {P.format()}^{c} at precision {prec}"
            )
        total = total + roots[0]
    return total, big, emb


def beta_conjugates(G: GaloisGroup, prec: int) -> list[LaurentSeries]:
    """The series values of sigma_a(beta) for every a in G, indexed like
    G.elements, as series over F_q in 1/t (grid ram = 1).

    Raises PrecisionError when the requested precision cannot separate or
    descend the conjugates (caller doubles and retries).
    """
    m = G.modulus
    K = m.ctx
    q = K.q
    ram = q - 1
    lam, big, emb = torsion_series(m, prec + m.degree + 1)
    back = None if big is K else emb
    out: list[LaurentSeries] = []
    for a in G.elements:
        img = carlitz_rho(a).evaluate_series(lam, lam.prec, emb=emb)
        conj = img
        for _ in range(q - 2):
            conj = conj * img
        conj = -conj  # beta = -lambda^(q-1)
        if ram > 1:
            conj = conj.change_grid(ram)
        if back is not None:
            conj = conj.descend_coeffs(emb, K)
        out.append(conj.truncate(min(conj.prec, prec)))
    # the conjugates must be pairwise distinct within the known windows
    lo = min(r.valuation() for r in out)
    hi = min(r.prec for r in out)
    streams = [tuple(r.coeff(e) for e in range(lo, hi)) for r in out]
    if len(set(streams)) != len(out):
        raise PrecisionError(f"conjugates of beta not separated at precision {prec}")
    return out


class InfinityEmbedding:
    """The [F:k] places of H_m above infinity, realized as series roots of the
    minimal polynomial of beta, indexed by the elements of G."""

    def __init__(self, field, precision: int):
        self.field = field
        self.G: GaloisGroup = field.G
        self.precision = precision
        self.roots: list[LaurentSeries] = beta_conjugates(self.G, precision)
        lo = min(r.valuation() for r in self.roots)
        hi = min(r.prec for r in self.roots)
        keys = [tuple(r.coeff(e) for e in range(lo, hi)) for r in self.roots]
        self.distinguished_index: int = min(range(len(keys)), key=keys.__getitem__)

    def root(self, i: int) -> LaurentSeries:
        return self.roots[i]
