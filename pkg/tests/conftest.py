"""Shared fixtures: the designated test fields with frozen oracle data.

Each row was computed twice by independent pipelines (point counting vs
L-values at s=0) before being frozen here; the counts/numerator columns come
from the point-counting side alone.
"""

from __future__ import annotations

import functools

import pytest

from rayclass.cycfield import CycField, RealCycField
from rayclass.ffield import context
from rayclass.fqpoly import PolyFq, parse_poly
from rayclass.geometry import Geometry
from rayclass.stickelberger import FContext

# (p, e, modulus, degree [H_m:k], genus, class number h)
TEST_FIELDS = [
    (2, 1, "t^3+t+1", 7, 3, 71),
    (2, 1, "t^3", 4, 1, 5),
    (2, 1, "t^3+t", 2, 0, 1),
    (2, 1, "t^2+t+1", 3, 0, 1),
    (3, 1, "t^2+1", 4, 0, 1),
    (3, 1, "t^2+t", 2, 0, 1),
    (3, 1, "t^3+t^2", 6, 1, 7),
    (3, 1, "t^3+t+2", 8, 2, 36),
    (3, 1, "t^3", 9, 3, 196),
    (2, 2, "t^3+g^2*t^2", 12, 3, 441),
    (5, 1, "t^2+2", 6, 0, 1),
]

# Subset with full divisor/Riemann-Roch machinery exercised in tests: small
# enough that principality tests take seconds, together covering genus 0-3,
# wild and tame ramification, and class numbers 1, 5, 7, 71.
GEOMETRY_FIELDS = [
    (2, 1, "t^3", 4, 1, 5),
    (3, 1, "t^3+t^2", 6, 1, 7),
    (2, 1, "t^3+t", 2, 0, 1),
    (2, 1, "t^3+t+1", 7, 3, 71),
]

GENUS0_FIELDS = [row for row in TEST_FIELDS if row[4] == 0]

# Frozen zeta data for the geometry fields: modulus -> (counts, numerator).
ZETA_ORACLE = {
    (2, "t^3+t+1"): ([7, 7, 10], [1, 4, 9, 15, 18, 16, 8]),
    (2, "t^3"): ([5], [1, 2, 2]),
    (3, "t^3+t^2"): ([7], [1, 3, 3]),
    (3, "t^3+t+2"): ([8, 14], [1, 4, 10, 12, 9]),
    (3, "t^3"): ([10, 10, 28], [1, 6, 18, 36, 54, 54, 27]),
    (4, "t^3+g^2*t^2"): ([13, 17, 49], [1, 8, 32, 80, 128, 128, 64]),
}

# Frozen Stickelberger elements on the canonical group-element ordering.
THETA_ORACLE = {
    (2, "t^3+t+1"): [1, -1, -1, -1, 0, 0, -1],
    (2, "t^3"): [1, -1, -1, 0],
    (3, "t^3+t^2"): [1, -1, -1, -1, -1, 0],
    (3, "t^3"): [1, -1, -1, -1, -1, 0, -1, 0, -1],
}


def field_id(row) -> str:
    p, e, m = row[0], row[1], row[2]
    return f"q{p**e}-{m.replace('*', '').replace('^', '')}"


@functools.lru_cache(maxsize=None)
def get_modulus(p: int, e: int, m: str) -> PolyFq:
    return parse_poly(context(p, e), m)


@functools.lru_cache(maxsize=None)
def get_field(p: int, e: int, m: str) -> RealCycField:
    return RealCycField(CycField(get_modulus(p, e, m)))


@functools.lru_cache(maxsize=None)
def get_fcontext(p: int, e: int, m: str) -> FContext:
    return FContext(get_field(p, e, m))


@functools.lru_cache(maxsize=None)
def get_geometry(p: int, e: int, m: str) -> Geometry:
    return Geometry(get_field(p, e, m))


@pytest.fixture(params=TEST_FIELDS, ids=field_id)
def test_field(request):
    return request.param


@pytest.fixture(params=GEOMETRY_FIELDS, ids=field_id)
def geometry_field(request):
    return request.param
