"""Shrinking-triangle sweeps and the one-variable strong-derivative demo.

A sweep collapses the triangle ``a = x0``, ``b = x0 + (-delta, eta)``,
``c = x0 + (delta, eta)`` with ``eta = delta**k`` and records the secant
plane at each step.  For ``f = x^2 + y^2`` the three path exponents
``k = 1, 2, 3`` drive the plane to ``z = 0``, ``z = y`` and ``y = 0``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .expr import Expr, eval1, eval2, deriv_fd, grad_fd
from .ga2 import Vector2
from .secant import (
    CollinearPoints,
    CoincidentAbscissae,
    PlaneNormal3,
    SamplePoint,
    SecantPlane,
    diff_quotient_1d,
    plane_unit_normal3,
    three_way,
)

AGREEMENT_RTOL = 1e-10
FAMILIES = ("isosceles", "rotated", "sheared")
_ROTATION = math.pi / 6
_SHEAR = 0.5


class InvariantFailure(AssertionError):
    """A per-row consistency check did not hold."""


@dataclass(frozen=True)
class SweepConfig:
    f: Expr
    k: float
    delta_start: float
    delta_end: float
    steps: int
    x0: Vector2 = Vector2(0.0, 0.0)
    family: str = "isosceles"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"path exponent k must be positive, got {self.k}")
        if not (0 < self.delta_end < self.delta_start and math.isfinite(self.delta_start)):
            raise ValueError("need 0 < delta_end < delta_start")
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown triangle family {self.family!r}; choose from {FAMILIES}")


@dataclass(frozen=True)
class SweepRecord:
    delta: float
    eta: float
    q: Vector2 | None
    q_norm: float
    normal: PlaneNormal3 | None
    tangent_gap: float
    degenerate: bool = False

    FIELDS = ("delta", "eta", "qx", "qy", "qnorm", "nx", "ny", "nz", "tangent_gap", "degenerate")

    def as_row(self) -> dict:
        nan = math.nan
        return {
            "delta": self.delta,
            "eta": self.eta,
            "qx": self.q.x if self.q else nan,
            "qy": self.q.y if self.q else nan,
            "qnorm": self.q_norm,
            "nx": self.normal.nx if self.normal else nan,
            "ny": self.normal.ny if self.normal else nan,
            "nz": self.normal.nz if self.normal else nan,
            "tangent_gap": self.tangent_gap,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class LimitDiagnosis:
    """Reading of the last two non-degenerate rows.

    ``label`` is one of ``"zero"`` (|q| -> 0), ``"finite"`` (q settles),
    ``"divergent"`` (|q| blows up; ``normal`` is the apparent limit plane's
    normal) or ``"undetermined"``.
    """

    label: str
    ratio: float
    q: Vector2 | None
    normal: PlaneNormal3 | None

    def describe(self) -> str:
        if self.label == "zero":
            return "|q| -> 0: secant planes approach the horizontal plane through x0"
        if self.label == "finite":
            return f"q -> ({self.q.x:.12g}, {self.q.y:.12g})"
        if self.label == "divergent":
            n = self.normal
            return f"|q| -> inf; unit normal -> ({n.nx:.12g}, {n.ny:.12g}, {n.nz:.12g})"
        return f"no clear limit (|q| ratio {self.ratio:.6g} over the last step)"


def delta_schedule(start: float, end: float, steps: int) -> list[float]:
    """``steps`` geometrically spaced values from ``start`` down to ``end``, endpoints exact."""
    ratio = math.log(end / start)
    out = [start * math.exp(ratio * i / (steps - 1)) for i in range(steps)]
    out[0], out[-1] = start, end
    return out


def triangle_points(family: str, x0: Vector2, delta: float, eta: float) -> tuple[Vector2, Vector2, Vector2]:
    b = Vector2(-delta, eta)
    c = Vector2(delta, eta)
    if family == "rotated":
        cs, sn = math.cos(_ROTATION), math.sin(_ROTATION)
        b = Vector2(cs * b.x - sn * b.y, sn * b.x + cs * b.y)
        c = Vector2(cs * c.x - sn * c.y, sn * c.x + cs * c.y)
    elif family == "sheared":
        b = Vector2(b.x + _SHEAR * b.y, b.y)
        c = Vector2(c.x + _SHEAR * c.y, c.y)
    return x0, x0 + b, x0 + c


def _tangent_normal(f: Expr, x0: Vector2) -> PlaneNormal3:
    g = grad_fd(f, x0)
    return plane_unit_normal3(SecantPlane(x0, eval2(f, x0.x, x0.y), g))


def _angle(n: PlaneNormal3, t: PlaneNormal3) -> float:
    """Angle between two plane normals, folded into ``[0, pi/2]``."""
    dot = abs(n.nx * t.nx + n.ny * t.ny + n.nz * t.nz)
    cx = n.ny * t.nz - n.nz * t.ny
    cy = n.nz * t.nx - n.nx * t.nz
    cz = n.nx * t.ny - n.ny * t.nx
    return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), dot)


def sweep_row(cfg: SweepConfig, delta: float, tangent: PlaneNormal3) -> SweepRecord:
    eta = delta**cfg.k
    a, b, c = triangle_points(cfg.family, cfg.x0, delta, eta)
    samples = [SamplePoint(p, eval2(cfg.f, p.x, p.y)) for p in (a, b, c)]
    try:
        check = three_way(*samples)
    except CollinearPoints:
        return SweepRecord(delta, eta, None, math.nan, None, math.nan, degenerate=True)
    if not check.conditioned_discrepancy() <= AGREEMENT_RTOL:
        raise InvariantFailure(
            f"q formulas disagree at delta={delta!r}: "
            f"{check.quotient}, {check.normal_combination}, {check.determinant}"
        )
    q = check.quotient
    normal = plane_unit_normal3(SecantPlane(a, samples[0].fval, q))
    return SweepRecord(delta, eta, q, q.norm(), normal, _angle(normal, tangent))


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """One record per delta, in decreasing delta."""
    tangent = _tangent_normal(cfg.f, cfg.x0)
    return [sweep_row(cfg, d, tangent) for d in delta_schedule(cfg.delta_start, cfg.delta_end, cfg.steps)]


def classify_limit(records: Sequence[SweepRecord]) -> LimitDiagnosis:
    rows = [r for r in records if not r.degenerate]
    if len(rows) < 2:
        return LimitDiagnosis("undetermined", math.nan, None, None)
    prev, last = rows[-2], rows[-1]
    if prev.q_norm == 0.0:
        ratio = 1.0 if last.q_norm == 0.0 else math.inf
    else:
        ratio = last.q_norm / prev.q_norm
    if ratio < 0.5 or last.q_norm == 0.0:
        label = "zero"
    elif 0.9 <= ratio <= 1.1 and (last.q - prev.q).norm() < 1e-6:
        label = "finite"
    elif ratio > 2.0:
        label = "divergent"
    else:
        label = "undetermined"
    return LimitDiagnosis(label, ratio, last.q, last.normal)


@dataclass(frozen=True)
class DerivativeLevel:
    h: float
    max_error: float
    trials: int


@dataclass(frozen=True)
class StrongDerivativeReport:
    x0: float
    derivative: float
    levels: list[DerivativeLevel]


def run_strong_derivative(
    g: Expr,
    x0: float,
    h_levels: Sequence[float],
    trials: int,
    seed: int = 0,
) -> StrongDerivativeReport:
    """Worst ``|(g(b) - g(a)) / (b - a) - g'(x0)|`` over random ``a != b`` within ``h`` of ``x0``.

    ``g'(x0)`` comes from a central difference.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    deriv = deriv_fd(g, x0)
    levels = []
    for h in h_levels:
        worst = 0.0
        for _ in range(trials):
            while True:
                a = rng.uniform(x0 - h, x0 + h)
                b = rng.uniform(x0 - h, x0 + h)
                try:
                    dq = diff_quotient_1d(eval1(g, a), eval1(g, b), a, b)
                    break
                except CoincidentAbscissae:
                    continue
            worst = max(worst, abs(dq - deriv))
        levels.append(DerivativeLevel(h, worst, trials))
    return StrongDerivativeReport(x0, deriv, levels)
