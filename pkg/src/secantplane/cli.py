"""Command-line front-end.

Exit codes: 0 success, 1 invariant failure, 2 expression error, 3 degenerate
geometry, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from contextlib import contextmanager
from typing import IO, Iterator, Sequence

from .expr import EvalError, ExprSyntaxError, eval2, parse, variables
from .ga2 import Vector2
from .identities import run_ga_check
from .output import write_csv, write_json, write_table
from .paradox import (
    FAMILIES,
    InvariantFailure,
    SweepConfig,
    SweepRecord,
    classify_limit,
    run_strong_derivative,
    run_sweep,
)
from .secant import (
    CollinearPoints,
    SamplePoint,
    SecantPlane,
    Triangle,
    oriented_area,
    plane_eval,
    plane_unit_normal3,
    three_way,
)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_EXPR = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # Values such as "-0.1,0.1" or "-x^2" are arguments, not options.
    _VALUE_LIKE = re.compile(r"^-(?:[\d.(]|.*[,^*/+() ])")

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = self._VALUE_LIKE

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _point(text: str) -> Vector2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y but got {text!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
        return Vector2(x, y)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two finite numbers in {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("text", "csv", "json"), default=default("text"))
    parser.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")
    parser.add_argument("--out", metavar="FILE", default=default(None), help="write to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="secantplane",
        description="Secant planes, the difference vector quotient and the tangent paradox.",
    )
    _add_global_options(parser, suppress=False)
    common = _ArgumentParser(add_help=False)
    _add_global_options(common, suppress=True)

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("secant", parents=[common], help="secant plane through three graph points")
    p.add_argument("--fn", required=True, metavar="EXPR", help="f(x, y), e.g. 'x^2+y^2'")
    p.add_argument("--a", required=True, type=_point, metavar="X,Y")
    p.add_argument("--b", required=True, type=_point, metavar="X,Y")
    p.add_argument("--c", required=True, type=_point, metavar="X,Y")

    p = sub.add_parser("sweep", parents=[common], help="collapse triangles along eta = delta^k")
    p.add_argument("--fn", required=True, metavar="EXPR")
    p.add_argument("--k", required=True, type=_finite_float, help="path exponent")
    p.add_argument("--delta-start", required=True, type=_finite_float)
    p.add_argument("--delta-end", required=True, type=_finite_float)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--x0", type=_point, default=Vector2(0.0, 0.0), metavar="X,Y")
    p.add_argument("--family", choices=FAMILIES, default="isosceles", help="triangle shape (default isosceles)")

    p = sub.add_parser("ga-check", parents=[common], help="randomised G2 identity suite")
    p.add_argument("--trials", type=int, default=10_000)

    p = sub.add_parser("strong-derivative", parents=[common], help="one-variable difference quotient convergence")
    p.add_argument("--fn1d", required=True, metavar="EXPR", help="g(x)")
    p.add_argument("--x0", required=True, type=_finite_float)
    p.add_argument("--h-levels", type=_positive_int, default=5, help="use h = 1e-1 ... 1e-N")
    p.add_argument("--trials", type=_positive_int, default=1000)
    return parser


@contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _vec(v: Vector2) -> list[float]:
    return [v.x, v.y]


def cmd_secant(args, out: IO[str]) -> int:
    f = parse(args.fn)
    a, b, c = args.a, args.b, args.c
    samples = [SamplePoint(p, eval2(f, p.x, p.y)) for p in (a, b, c)]
    tri = Triangle(a, b, c)
    check = three_way(*samples)
    plane = SecantPlane(a, samples[0].fval, check.quotient)
    normal = plane_unit_normal3(plane)
    report = {
        "fn": args.fn,
        "a": _vec(a),
        "b": _vec(b),
        "c": _vec(c),
        "f": [s.fval for s in samples],
        "tau": oriented_area(a, b, c),
        "da": _vec(tri.da),
        "db": _vec(tri.db),
        "dc": _vec(tri.dc),
        "q_quotient": _vec(check.quotient),
        "q_normal_combination": _vec(check.normal_combination),
        "q_determinant": _vec(check.determinant),
        "max_discrepancy": check.discrepancy(),
        "plane_at": [plane_eval(plane, p) for p in (a, b, c)],
        "normal": [normal.nx, normal.ny, normal.nz],
    }
    if args.format == "json":
        write_json(report, out)
    elif args.format == "csv":
        flat = {}
        for key, value in report.items():
            if not isinstance(value, list):
                flat[key] = value
                continue
            # per-vertex lists are suffixed a/b/c, coordinates x/y/z
            suffixes = "abc" if key in ("f", "plane_at") else "xyz"
            for suffix, v in zip(suffixes, value):
                flat[f"{key}_{suffix}"] = v
        write_csv([flat], list(flat), out)
    else:
        q = check.quotient
        out.write(f"f(x, y) = {args.fn}\n")
        out.write(f"a = {a.x!r},{a.y!r}   b = {b.x!r},{b.y!r}   c = {c.x!r},{c.y!r}\n")
        out.write(f"f(a), f(b), f(c) = {samples[0].fval!r}, {samples[1].fval!r}, {samples[2].fval!r}\n")
        out.write(f"tau = {report['tau']!r}\n")
        for name in ("da", "db", "dc"):
            e = report[name]
            out.write(f"{name} = ({e[0]!r}, {e[1]!r})\n")
        out.write(f"q (geometric quotient)   = ({q.x!r}, {q.y!r})\n")
        nc = check.normal_combination
        out.write(f"q (normal combination)   = ({nc.x!r}, {nc.y!r})\n")
        dq = check.determinant
        out.write(f"q (determinant)          = ({dq.x!r}, {dq.y!r})\n")
        out.write(f"max discrepancy          = {report['max_discrepancy']!r}\n")
        pa = report["plane_at"]
        out.write(f"plane at a, b, c         = {pa[0]!r}, {pa[1]!r}, {pa[2]!r}\n")
        out.write(f"unit normal              = ({normal.nx!r}, {normal.ny!r}, {normal.nz!r})\n")
    return EXIT_OK


def cmd_sweep(args, out: IO[str]) -> int:
    f = parse(args.fn)
    try:
        cfg = SweepConfig(f, args.k, args.delta_start, args.delta_end, args.steps, args.x0, args.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = run_sweep(cfg)
    rows = [r.as_row() for r in records]
    if args.format == "json":
        write_json(rows, out)
    elif args.format == "csv":
        write_csv(rows, SweepRecord.FIELDS, out)
    else:
        write_table(rows, SweepRecord.FIELDS, out)
        out.write(f"limit: {classify_limit(records).describe()}\n")
    return EXIT_OK


def cmd_ga_check(args, out: IO[str]) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    report = run_ga_check(args.seed, args.trials)
    rows = [
        {"invariant": r.name, "max_error": r.max_error, "tolerance": r.tolerance, "failures": r.failures, "passed": r.passed}
        for r in report.results
    ]
    fields = ("invariant", "max_error", "tolerance", "failures", "passed")
    if args.format == "json":
        write_json({"seed": report.seed, "trials": report.trials, "passed": report.passed, "invariants": rows}, out)
    elif args.format == "csv":
        write_csv(rows, fields, out)
    else:
        write_table(rows, fields, out)
        out.write(f"{'all invariants hold' if report.passed else 'FAILED'} (seed {report.seed}, {report.trials} trials)\n")
    for r in report.failed():
        print(f"invariant {r.name} failed {r.failures} time(s); first: {r.first_failure}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_INVARIANT


def cmd_strong_derivative(args, out: IO[str]) -> int:
    g = parse(args.fn1d)
    if "y" in variables(g):
        raise ExprSyntaxError(args.fn1d.index("y"), "a one-variable expression may only use x")
    levels = [10.0**-i for i in range(1, args.h_levels + 1)]
    report = run_strong_derivative(g, args.x0, levels, args.trials, args.seed)
    rows = [{"h": lv.h, "max_error": lv.max_error, "trials": lv.trials} for lv in report.levels]
    fields = ("h", "max_error", "trials")
    if args.format == "json":
        write_json({"x0": report.x0, "derivative": report.derivative, "levels": rows}, out)
    elif args.format == "csv":
        write_csv(rows, fields, out)
    else:
        out.write(f"g'(x0) ~ {report.derivative!r} at x0 = {report.x0!r} (central difference)\n")
        write_table(rows, fields, out)
    return EXIT_OK


COMMANDS = {
    "secant": cmd_secant,
    "sweep": cmd_sweep,
    "ga-check": cmd_ga_check,
    "strong-derivative": cmd_strong_derivative,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _output(args.out) as out:
            return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"secantplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExprSyntaxError, EvalError) as exc:
        print(f"secantplane: expression error: {exc}", file=sys.stderr)
        return EXIT_EXPR
    except CollinearPoints as exc:
        print(f"secantplane: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvariantFailure as exc:
        print(f"secantplane: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"secantplane: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
