"""Randomised identity suite for the G2 implementation.

Every check draws its inputs from one ``random.Random(seed)`` stream, so a
report is reproducible from ``(seed, trials)``.  The product under test is a
parameter so that a deliberately broken table can be fed in.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .ga2 import (
    E1,
    I2,
    ONE,
    Multivector,
    Vector2,
    det2_via_rotation,
    det2_via_wedge,
    mv_inverse,
    mv_mul,
    polar_decompose,
    vec_dot,
    vec_inverse,
    vec_wedge,
)

Product = Callable[[Multivector, Multivector], Multivector]

# floor for operand-scaled tolerances
ATOL = 1e-14


@dataclass
class InvariantResult:
    name: str
    tolerance: float
    max_error: float = 0.0
    failures: int = 0
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, error: float, detail: Callable[[], str]) -> None:
        if error > self.max_error or math.isnan(error):
            self.max_error = error
        if not error <= self.tolerance:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail()


@dataclass
class GACheckReport:
    seed: int
    trials: int
    results: list[InvariantResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[InvariantResult]:
        return [r for r in self.results if not r.passed]


def _rel(err: float, scale: float, rtol: float) -> float:
    """``err`` as a fraction of ``scale``, with the scale floored at ``ATOL / rtol``."""
    return err / max(scale, ATOL / rtol)


def _vec(rng: random.Random) -> Vector2:
    # spread magnitudes over several decades
    s = 10.0 ** rng.uniform(-3, 3)
    return Vector2(s * rng.uniform(-1, 1), s * rng.uniform(-1, 1))


def _nonzero_vec(rng: random.Random) -> Vector2:
    while True:
        v = _vec(rng)
        if v.norm2() > 0.0:
            return v


def _mv(rng: random.Random) -> Multivector:
    return Multivector(*(rng.uniform(-1, 1) for _ in range(4)))


def _maxabs(m: Multivector) -> float:
    return max(abs(m.s), abs(m.x), abs(m.y), abs(m.b))


def _diff(m: Multivector, n: Multivector) -> float:
    return max(abs(m.s - n.s), abs(m.x - n.x), abs(m.y - n.y), abs(m.b - n.b))


def check_symmetric_part(rng, res, product: Product) -> None:
    u, v = _vec(rng), _vec(rng)
    uv = product(u.to_multivector(), v.to_multivector())
    vu = product(v.to_multivector(), u.to_multivector())
    sym = (uv + vu) * 0.5
    err = max(abs(sym.s - vec_dot(u, v)), abs(sym.x), abs(sym.y), abs(sym.b))
    res.record(_rel(err, u.norm() * v.norm(), res.tolerance), lambda: f"u={u}, v={v}, sym={sym}")


def check_quadratic_form(rng, res, product: Product) -> None:
    v = _vec(rng)
    vv = product(v.to_multivector(), v.to_multivector())
    err = _diff(vv, Multivector(v.x * v.x + v.y * v.y, 0.0, 0.0, 0.0))
    res.record(err, lambda: f"v={v}, vv={vv}")


def check_anti_commutation(rng, res, product: Product) -> None:
    u, v = _vec(rng), _vec(rng)
    vu = product(v.to_multivector(), u.to_multivector())
    uv = product(u.to_multivector(), v.to_multivector())
    expected = 2.0 * vec_dot(u, v) - uv
    err = _diff(vu, expected)
    res.record(_rel(err, u.norm() * v.norm(), res.tolerance), lambda: f"u={u}, v={v}, vu={vu}, 2u.v-uv={expected}")


def check_associativity(rng, res, product: Product) -> None:
    a, b, c = _mv(rng), _mv(rng), _mv(rng)
    left = product(product(a, b), c)
    right = product(a, product(b, c))
    res.record(_diff(left, right), lambda: f"a={a}, b={b}, c={c}")


def check_pseudoscalar(rng, res, product: Product) -> None:
    sq = product(I2, I2)
    inv = mv_inverse(I2)
    err = max(_diff(sq, -ONE), _diff(inv, -I2))
    res.record(err, lambda: f"I2*I2={sq}, I2^-1={inv}")


def check_orientation_invariance(rng, res, product: Product) -> None:
    phi = rng.uniform(0.0, 2.0 * math.pi)
    sign = rng.choice((1.0, -1.0))
    c, s = math.cos(phi), math.sin(phi)
    e1 = Vector2(c, s)
    e2 = Vector2(-sign * s, sign * c)
    p = product(e1.to_multivector(), e2.to_multivector())
    res.record(_diff(p, Multivector(0.0, 0.0, 0.0, sign)), lambda: f"phi={phi}, det={sign}, e1'e2'={p}")


def check_zero_divisor(rng, res, product: Product) -> None:
    p = product(ONE + E1, ONE - E1)
    res.record(_maxabs(p), lambda: f"(1+e1)(1-e1)={p}")


def check_vector_inverse(rng, res, product: Product) -> None:
    v = _nonzero_vec(rng)
    p = product(v.to_multivector(), vec_inverse(v).to_multivector())
    res.record(_diff(p, ONE), lambda: f"v={v}, v v^-1={p}")


def check_multivector_inverse(rng, res, product: Product) -> None:
    while True:
        m = _mv(rng)
        n = m.s * m.s + m.b * m.b - m.x * m.x - m.y * m.y
        # keep the conjugate norm away from the zero-divisor cone
        if abs(n) >= 0.1 * (m.s * m.s + m.b * m.b + m.x * m.x + m.y * m.y):
            break
    p = product(m, mv_inverse(m))
    res.record(_diff(p, ONE), lambda: f"m={m}, m m^-1={p}")


def check_determinant_paths(rng, res, product: Product) -> None:
    u, v = _vec(rng), _vec(rng)
    ref = u.x * v.y - u.y * v.x
    dw = det2_via_wedge(u, v)
    dr = det2_via_rotation(u, v)
    ok = dw == ref and dr == ref and vec_wedge(u, v) == ref
    res.record(0.0 if ok else max(abs(dw - ref), abs(dr - ref), math.ulp(ref)), lambda: f"u={u}, v={v}, wedge-path={dw!r}, rotation-path={dr!r}, direct={ref!r}")


def check_polar_form(rng, res, product: Product) -> None:
    u, v = _nonzero_vec(rng), _nonzero_vec(rng)
    pf = polar_decompose(u, v)
    err = max(abs(pf.r * math.cos(pf.theta) - vec_dot(u, v)), abs(pf.r * math.sin(pf.theta) - vec_wedge(u, v)))
    in_range = 0.0 <= pf.theta < 2.0 * math.pi
    res.record(_rel(err, pf.r, res.tolerance) if in_range else math.inf, lambda: f"u={u}, v={v}, polar={pf}")


# (name, check, tolerance); zero tolerance means exact
INVARIANTS: list[tuple[str, Callable, float]] = [
    ("symmetric_part", check_symmetric_part, 1e-13),
    ("quadratic_form", check_quadratic_form, 0.0),
    ("anti_commutation", check_anti_commutation, 1e-13),
    ("associativity", check_associativity, 1e-12),
    ("pseudoscalar_square", check_pseudoscalar, 0.0),
    ("orientation_invariance", check_orientation_invariance, ATOL),
    ("zero_divisor", check_zero_divisor, 0.0),
    ("vector_inverse", check_vector_inverse, 1e-14),
    ("multivector_inverse", check_multivector_inverse, 1e-12),
    ("determinant_paths", check_determinant_paths, 0.0),
    ("polar_form", check_polar_form, 1e-12),
]


def run_ga_check(seed: int = 0, trials: int = 10_000, product: Product = mv_mul) -> GACheckReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    report = GACheckReport(seed, trials)
    results = [InvariantResult(name, tol) for name, _, tol in INVARIANTS]
    report.results = results
    for _ in range(trials):
        for (_, check, _), res in zip(INVARIANTS, results):
            check(rng, res, product)
    return report
