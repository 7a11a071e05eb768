"""Secant planes of graphs of two-variable functions.

Three routes to the difference vector quotient ``q`` of the plane
``z = f(a) + q . (v - a)`` through ``(a, f(a))``, ``(b, f(b))``, ``(c, f(c))``:

* :func:`q_quotient` -- geometric quotient of a vector by the orientation
  ``(b - a) ^ (c - a)`` in G2;
* :func:`q_normal_combination` -- symmetric combination of the rotated
  triangle edges;
* :func:`plane_from_determinant` -- Laplace expansion of the 3x3
  determinant, written with plain float arithmetic only so it can serve as
  an independent check of the other two.

The one-variable secant line is included as a baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ga2 import (
    Multivector,
    Vector2,
    mv_inverse,
    mv_mul,
    rotate90,
    vec_dot,
    vec_wedge,
)

__all__ = [
    "DEGENERACY_RTOL",
    "GRADE_PURITY_RTOL",
    "CollinearPoints",
    "CoincidentAbscissae",
    "GradeImpurity",
    "SamplePoint",
    "Triangle",
    "SecantPlane",
    "PlaneNormal3",
    "SecantLine",
    "QuotientCheck",
    "oriented_area",
    "q_quotient",
    "q_quotient_raw",
    "q_normal_combination",
    "plane_from_determinant",
    "plane_eval",
    "plane_unit_normal3",
    "diff_quotient_1d",
    "secant_line_1d",
    "three_way",
]

# |2 tau| <= DEGENERACY_RTOL * (longest edge)^2 means no unique plane
DEGENERACY_RTOL = 1e-12
GRADE_PURITY_RTOL = 1e-10


class CollinearPoints(ValueError):
    """The three domain points do not span a triangle."""


class CoincidentAbscissae(ValueError):
    """A one-variable difference quotient was asked for with ``a == b``."""


class GradeImpurity(ArithmeticError):
    """The geometric quotient carried non-vector parts above tolerance."""


@dataclass(frozen=True, slots=True)
class SamplePoint:
    p: Vector2
    fval: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.fval):
            raise ValueError(f"non-finite sample value {self.fval!r} at {self.p}")


@dataclass(frozen=True, slots=True)
class Triangle:
    """An oriented, non-degenerate triangle ``a, b, c``.

    ``da = c - b``, ``db = a - c`` and ``dc = b - a`` are the edges opposite
    each vertex; ``tau`` is the signed area (positive counter-clockwise).
    Construction raises :class:`CollinearPoints` when
    ``|2 tau| <= DEGENERACY_RTOL * max_edge^2``.

    ``2 tau`` is the correctly rounded mean of ``da ^ db``, ``db ^ dc`` and
    ``dc ^ da``.  Relabelling the vertices only permutes (or negates) those
    three products, so ``tau`` is exactly invariant under even permutations
    and exactly negated under odd ones.
    """

    a: Vector2
    b: Vector2
    c: Vector2
    tau: float = field(init=False)
    da: Vector2 = field(init=False)
    db: Vector2 = field(init=False)
    dc: Vector2 = field(init=False)

    def __post_init__(self) -> None:
        a, b, c = self.a, self.b, self.c
        da, db, dc = c - b, a - c, b - a
        two_tau = math.fsum((vec_wedge(da, db), vec_wedge(db, dc), vec_wedge(dc, da))) / 3.0
        max_edge2 = max(da.norm2(), db.norm2(), dc.norm2())
        if not abs(two_tau) > DEGENERACY_RTOL * max_edge2:
            raise CollinearPoints(f"points {a}, {b}, {c} are collinear")
        object.__setattr__(self, "tau", 0.5 * two_tau)
        object.__setattr__(self, "da", da)
        object.__setattr__(self, "db", db)
        object.__setattr__(self, "dc", dc)

    @property
    def two_tau(self) -> float:
        return 2.0 * self.tau

    def max_edge(self) -> float:
        return max(self.da.norm(), self.db.norm(), self.dc.norm())


@dataclass(frozen=True, slots=True)
class SecantPlane:
    """``z = fbase + q . (v - base)``."""

    base: Vector2
    fbase: float
    q: Vector2

    def __call__(self, v: Vector2) -> float:
        return plane_eval(self, v)


@dataclass(frozen=True, slots=True)
class PlaneNormal3:
    """Unit normal of a non-vertical plane in (x, y, z)-space.

    Sign convention: ``nz <= 0``; if ``nz == 0`` then ``ny >= 0``, then
    ``nx >= 0``.
    """

    nx: float
    ny: float
    nz: float

    def __iter__(self):
        yield self.nx
        yield self.ny
        yield self.nz

    def distance(self, other) -> float:
        ox, oy, oz = other
        return math.sqrt((self.nx - ox) ** 2 + (self.ny - oy) ** 2 + (self.nz - oz) ** 2)


@dataclass(frozen=True, slots=True)
class SecantLine:
    """``z = ga + slope * (x - a)``."""

    a: float
    ga: float
    slope: float

    def at(self, x: float) -> float:
        return self.ga + self.slope * (x - self.a)

    def determinant(self, x: float, z: float, b: float, gb: float) -> float:
        """``det [[x - a, z - ga], [b - a, gb - ga]]``; zero on the line."""
        return (x - self.a) * (gb - self.ga) - (z - self.ga) * (b - self.a)


def _require_triangle(two_tau: float, ba: Vector2, ca: Vector2) -> None:
    cbx, cby = ca.x - ba.x, ca.y - ba.y
    max_edge2 = max(ba.norm2(), ca.norm2(), cbx * cbx + cby * cby)
    if not abs(two_tau) > DEGENERACY_RTOL * max_edge2:
        raise CollinearPoints("sample points are collinear")


def oriented_area(a: Vector2, b: Vector2, c: Vector2) -> float:
    return 0.5 * vec_wedge(b - a, c - a)


def q_quotient_raw(s_a: SamplePoint, s_b: SamplePoint, s_c: SamplePoint) -> Multivector:
    """The full G2 product ``N [(b - a) ^ (c - a)]^-1`` before grade projection.

    ``N = (f(b) - f(a)) (c - a) - (f(c) - f(a)) (b - a)``.
    """
    a = s_a.p
    ba = s_b.p - a
    ca = s_c.p - a
    two_tau = vec_wedge(ba, ca)
    _require_triangle(two_tau, ba, ca)
    dfb = s_b.fval - s_a.fval
    dfc = s_c.fval - s_a.fval
    numerator = Multivector(0.0, dfb * ca.x - dfc * ba.x, dfb * ca.y - dfc * ba.y, 0.0)
    orientation = Multivector(0.0, 0.0, 0.0, two_tau)
    return mv_mul(numerator, mv_inverse(orientation))


def q_quotient(s_a: SamplePoint, s_b: SamplePoint, s_c: SamplePoint) -> Vector2:
    raw = q_quotient_raw(s_a, s_b, s_c)
    scale = max(1.0, math.hypot(raw.x, raw.y))
    if abs(raw.s) > GRADE_PURITY_RTOL * scale or abs(raw.b) > GRADE_PURITY_RTOL * scale:
        raise GradeImpurity(f"quotient {raw} is not a vector")
    return raw.vector_part()


def q_normal_combination(s_a: SamplePoint, s_b: SamplePoint, s_c: SamplePoint) -> Vector2:
    """Sum of outward edge normals ``I2 d`` weighted by ``(f_i + f_j) / 2 tau``.

    The edge normals sum to zero, so shifting every ``f_i`` by a constant
    leaves the result unchanged in exact arithmetic.  In floating point the
    rounded edges do not cancel exactly, and a large common value of ``f``
    would leak through; the values are therefore shifted by their median
    first, which makes a constant ``f`` give exactly zero.

    The three terms are added with :func:`math.fsum`.  With the median shift
    and the symmetric ``tau`` of :class:`Triangle`, the result is
    bit-identical under every reordering of the samples.
    """
    tri = Triangle(s_a.p, s_b.p, s_c.p)
    two_tau = tri.two_tau
    mid = sorted((s_a.fval, s_b.fval, s_c.fval))[1]
    fa, fb, fc = s_a.fval - mid, s_b.fval - mid, s_c.fval - mid
    na = rotate90(tri.da, "left")
    nb = rotate90(tri.db, "left")
    nc = rotate90(tri.dc, "left")
    wc = (fa + fb) / two_tau
    wb = (fa + fc) / two_tau
    wa = (fb + fc) / two_tau
    return Vector2(
        math.fsum((wc * nc.x, wb * nb.x, wa * na.x)),
        math.fsum((wc * nc.y, wb * nb.y, wa * na.y)),
    )


def plane_from_determinant(s_a: SamplePoint, s_b: SamplePoint, s_c: SamplePoint) -> SecantPlane:
    """Expand ``det [[x-a1, y-a2, z-fa], [b1-a1, b2-a2, fb-fa], [c1-a1, c2-a2, fc-fa]] = 0``
    along its first row and solve for ``z``.

    Uses float arithmetic on raw coordinates only; no G2 operations.
    """
    a1, a2 = s_a.p.x, s_a.p.y
    b1, b2 = s_b.p.x - a1, s_b.p.y - a2
    c1, c2 = s_c.p.x - a1, s_c.p.y - a2
    fb = s_b.fval - s_a.fval
    fc = s_c.fval - s_a.fval

    # cofactors of x - a1, y - a2, z - fa
    cx = b2 * fc - fb * c2
    cy = -(b1 * fc - fb * c1)
    cz = b1 * c2 - b2 * c1

    d1, d2 = s_c.p.x - s_b.p.x, s_c.p.y - s_b.p.y
    max_edge2 = max(b1 * b1 + b2 * b2, c1 * c1 + c2 * c2, d1 * d1 + d2 * d2)
    if not abs(cz) > DEGENERACY_RTOL * max_edge2:
        raise CollinearPoints(f"points {s_a.p}, {s_b.p}, {s_c.p} are collinear")
    # cx (x-a1) + cy (y-a2) + cz (z-fa) = 0
    return SecantPlane(s_a.p, s_a.fval, Vector2(-cx / cz, -cy / cz))


def plane_eval(plane: SecantPlane, v: Vector2) -> float:
    return plane.fbase + vec_dot(plane.q, v - plane.base)


def plane_unit_normal3(plane: SecantPlane) -> PlaneNormal3:
    qx, qy = plane.q.x, plane.q.y
    n = math.sqrt(qx * qx + qy * qy + 1.0)
    if math.isinf(n):
        n = math.hypot(math.hypot(qx, qy), 1.0)
    return PlaneNormal3(qx / n, qy / n, -1.0 / n)


@dataclass(frozen=True, slots=True)
class QuotientCheck:
    """``q`` by all three routes for one triple of samples."""

    quotient: Vector2
    normal_combination: Vector2
    determinant: Vector2
    # (|fa| + |fb| + |fc|) * max_edge / |2 tau|: how far one ulp of sample
    # rounding can move q on this triangle
    summand_scale: float

    def max_difference(self) -> float:
        q1, q2, q3 = self.quotient, self.normal_combination, self.determinant
        return max((q1 - q2).norm(), (q1 - q3).norm(), (q2 - q3).norm())

    def magnitude(self) -> float:
        return max(self.quotient.norm(), self.normal_combination.norm(), self.determinant.norm())

    def discrepancy(self) -> float:
        """Largest pairwise difference relative to ``max(1, |q|)``."""
        return self.max_difference() / max(1.0, self.magnitude())

    def conditioned_discrepancy(self) -> float:
        """Largest pairwise difference relative to the sensitivity of ``q`` to sample rounding.

        On thin triangles far from the origin, one ulp of ``f`` divided by the
        triangle's width can exceed ``|q|``; every formula then disagrees at
        that level and only this measure stays meaningful.
        """
        return self.max_difference() / max(1.0, self.magnitude(), self.summand_scale)


def three_way(s_a: SamplePoint, s_b: SamplePoint, s_c: SamplePoint) -> QuotientCheck:
    tri = Triangle(s_a.p, s_b.p, s_c.p)
    fsum = abs(s_a.fval) + abs(s_b.fval) + abs(s_c.fval)
    return QuotientCheck(
        q_quotient(s_a, s_b, s_c),
        q_normal_combination(s_a, s_b, s_c),
        plane_from_determinant(s_a, s_b, s_c).q,
        fsum * tri.max_edge() / abs(tri.two_tau),
    )


def diff_quotient_1d(ga: float, gb: float, a: float, b: float) -> float:
    if a == b:
        raise CoincidentAbscissae(f"a == b == {a}")
    return (gb - ga) / (b - a)


def secant_line_1d(ga: float, gb: float, a: float, b: float) -> SecantLine:
    return SecantLine(a, ga, diff_quotient_1d(ga, gb, a, b))
