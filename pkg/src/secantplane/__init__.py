"""Geometric algebra of the plane and the difference vector quotient of secant planes."""

from .expr import EvalError, ExprSyntaxError, eval2, grad_fd, parse, to_source
from .ga2 import (
    E1,
    E2,
    I2,
    ONE,
    Multivector,
    NonInvertible,
    PolarForm,
    Vector2,
    ZeroVector,
    det2_via_rotation,
    det2_via_wedge,
    mv_inverse,
    mv_mul,
    polar_decompose,
    rotate90,
    vec_dot,
    vec_inverse,
    vec_wedge,
)
from .paradox import SweepConfig, SweepRecord, classify_limit, run_strong_derivative, run_sweep
from .secant import (
    CoincidentAbscissae,
    CollinearPoints,
    PlaneNormal3,
    SamplePoint,
    SecantPlane,
    Triangle,
    diff_quotient_1d,
    oriented_area,
    plane_eval,
    plane_from_determinant,
    plane_unit_normal3,
    q_normal_combination,
    q_quotient,
    secant_line_1d,
)

__version__ = "0.1.0"
