"""Geometric algebra of the Euclidean plane.

Elements are stored densely as four coefficients over the basis
``{1, e1, e2, I2}`` with ``I2 = e1 e2``.  The product table follows from
``e1^2 = e2^2 = 1`` and ``e1 e2 = -e2 e1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

__all__ = [
    "Multivector",
    "Vector2",
    "PolarForm",
    "ZeroVector",
    "NonInvertible",
    "ONE",
    "I2",
    "E1",
    "E2",
    "as_multivector",
    "mv_mul",
    "vec_dot",
    "vec_wedge",
    "vec_inverse",
    "mv_inverse",
    "rotate90",
    "det2_via_wedge",
    "det2_via_rotation",
    "polar_decompose",
]


class ZeroVector(ZeroDivisionError):
    """A vector of zero length was used where a non-zero one is needed."""


class NonInvertible(ZeroDivisionError):
    """The multivector is a zero divisor and has no inverse."""


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite component: {v!r}")


@dataclass(frozen=True, slots=True)
class Multivector:
    """``s + x e1 + y e2 + b I2``."""

    s: float = 0.0
    x: float = 0.0
    y: float = 0.0
    b: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(self.s, self.x, self.y, self.b)

    def grade(self, k: int) -> Multivector:
        if k == 0:
            return Multivector(self.s, 0.0, 0.0, 0.0)
        if k == 1:
            return Multivector(0.0, self.x, self.y, 0.0)
        if k == 2:
            return Multivector(0.0, 0.0, 0.0, self.b)
        raise ValueError(f"grade must be 0, 1 or 2, got {k}")

    def vector_part(self) -> Vector2:
        return Vector2(self.x, self.y)

    def conjugate(self) -> Multivector:
        """Clifford conjugate: negates grades 1 and 2."""
        return Multivector(self.s, -self.x, -self.y, -self.b)

    def components(self) -> tuple[float, float, float, float]:
        return (self.s, self.x, self.y, self.b)

    def __add__(self, other: Union[Multivector, Vector2, float]) -> Multivector:
        o = as_multivector(other)
        return Multivector(self.s + o.s, self.x + o.x, self.y + o.y, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: Union[Multivector, Vector2, float]) -> Multivector:
        o = as_multivector(other)
        return Multivector(self.s - o.s, self.x - o.x, self.y - o.y, self.b - o.b)

    def __rsub__(self, other: Union[Vector2, float]) -> Multivector:
        return as_multivector(other) - self

    def __neg__(self) -> Multivector:
        return Multivector(-self.s, -self.x, -self.y, -self.b)

    def __mul__(self, other: Union[Multivector, Vector2, float]) -> Multivector:
        if isinstance(other, (int, float)):
            return Multivector(self.s * other, self.x * other, self.y * other, self.b * other)
        return mv_mul(self, other)

    def __rmul__(self, other: Union[Vector2, float]) -> Multivector:
        if isinstance(other, (int, float)):
            return self * other
        return mv_mul(other, self)

    def __truediv__(self, k: float) -> Multivector:
        return Multivector(self.s / k, self.x / k, self.y / k, self.b / k)


@dataclass(frozen=True, slots=True)
class Vector2:
    """A grade-1 element; ``x e1 + y e2``."""

    x: float
    y: float

    def __post_init__(self) -> None:
        _check_finite(self.x, self.y)

    def to_multivector(self) -> Multivector:
        return Multivector(0.0, self.x, self.y, 0.0)

    def norm2(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def __add__(self, other: Vector2) -> Vector2:
        return Vector2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vector2) -> Vector2:
        return Vector2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Vector2:
        return Vector2(-self.x, -self.y)

    def __mul__(self, k):
        if isinstance(k, (int, float)):
            return Vector2(self.x * k, self.y * k)
        return mv_mul(self, k)

    def __rmul__(self, k):
        if isinstance(k, (int, float)):
            return Vector2(k * self.x, k * self.y)
        return mv_mul(k, self)

    def __truediv__(self, k: float) -> Vector2:
        return Vector2(self.x / k, self.y / k)

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True, slots=True)
class PolarForm:
    """``uv = r (cos theta + I2 sin theta)`` with ``theta`` in ``[0, 2 pi)``."""

    r: float
    theta: float


ONE = Multivector(1.0, 0.0, 0.0, 0.0)
I2 = Multivector(0.0, 0.0, 0.0, 1.0)
E1 = Vector2(1.0, 0.0)
E2 = Vector2(0.0, 1.0)


def as_multivector(v: Union[Multivector, Vector2, float]) -> Multivector:
    if isinstance(v, Multivector):
        return v
    if isinstance(v, Vector2):
        return Multivector(0.0, v.x, v.y, 0.0)
    if isinstance(v, (int, float)):
        return Multivector(float(v), 0.0, 0.0, 0.0)
    raise TypeError(f"cannot embed {type(v).__name__} in G2")


def mv_mul(lhs: Union[Multivector, Vector2], rhs: Union[Multivector, Vector2]) -> Multivector:
    """Geometric product ``lhs rhs``."""
    a = as_multivector(lhs)
    c = as_multivector(rhs)
    return Multivector(
        a.s * c.s + a.x * c.x + a.y * c.y - a.b * c.b,
        a.s * c.x + a.x * c.s - a.y * c.b + a.b * c.y,
        a.s * c.y + a.y * c.s + a.x * c.b - a.b * c.x,
        a.s * c.b + a.b * c.s + a.x * c.y - a.y * c.x,
    )


def vec_dot(u: Vector2, v: Vector2) -> float:
    return u.x * v.x + u.y * v.y


def vec_wedge(u: Vector2, v: Vector2) -> float:
    """I2 coefficient of ``u ^ v``, i.e. ``det [[u.x, u.y], [v.x, v.y]]``."""
    return u.x * v.y - u.y * v.x


def vec_inverse(v: Vector2) -> Vector2:
    n2 = v.norm2()
    if n2 == 0.0:
        raise ZeroVector("zero vector has no inverse")
    return Vector2(v.x / n2, v.y / n2)


def mv_inverse(m: Multivector) -> Multivector:
    """Inverse through the Clifford conjugate.

    ``m * conj(m)`` is the scalar ``s^2 + b^2 - x^2 - y^2``; when it vanishes
    ``m`` is a zero divisor (e.g. ``1 + e1``).
    """
    n = m.s * m.s + m.b * m.b - m.x * m.x - m.y * m.y
    if n == 0.0:
        raise NonInvertible(f"{m} is a zero divisor")
    return Multivector(m.s / n, -m.x / n, -m.y / n, -m.b / n)


def rotate90(v: Vector2, side: Literal["left", "right"] = "right") -> Vector2:
    """Quarter turn through multiplication by ``I2``.

    ``side="right"`` gives ``v I2 = (-v.y, v.x)``, a counter-clockwise turn;
    ``side="left"`` gives ``I2 v = -v I2 = (v.y, -v.x)``.
    """
    if side == "right":
        return Vector2(-v.y, v.x)
    if side == "left":
        return Vector2(v.y, -v.x)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def det2_via_wedge(u: Vector2, v: Vector2) -> float:
    """Determinant of rows ``u``, ``v`` as the ratio ``(u ^ v) / I2``."""
    uv = mv_mul(u, v)
    vu = mv_mul(v, u)
    wedge = (uv - vu) * 0.5
    # (I2)^-1 = -I2
    return mv_mul(wedge, -I2).s


def det2_via_rotation(u: Vector2, v: Vector2) -> float:
    """Determinant of rows ``u``, ``v`` as the scalar product ``(u I2) . v``."""
    return vec_dot(rotate90(u, "right"), v)


def polar_decompose(u: Vector2, v: Vector2) -> PolarForm:
    nu = u.norm()
    nv = v.norm()
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("polar form needs two non-zero vectors")
    theta = math.atan2(vec_wedge(u, v), vec_dot(u, v))
    if theta < 0.0:
        theta += 2.0 * math.pi
        if theta >= 2.0 * math.pi:
            theta = 0.0
    return PolarForm(nu * nv, theta)
