import io
import math

import pytest
from hypothesis import given, strategies as st

from secantplane.expr import parse
from secantplane.ga2 import Vector2
from secantplane.output import read_csv, write_csv
from secantplane.paradox import (
    FAMILIES,
    InvariantFailure,
    SweepConfig,
    SweepRecord,
    classify_limit,
    delta_schedule,
    run_strong_derivative,
    run_sweep,
    sweep_row,
    triangle_points,
)
from secantplane.secant import PlaneNormal3, SamplePoint, diff_quotient_1d, q_quotient

PARABOLOID = parse("x^2 + y^2")


def sweep(k, start=1e-1, end=1e-5, steps=9, **kw):
    return run_sweep(SweepConfig(PARABOLOID, k, start, end, steps, **kw))


# --- configuration ----------------------------------------------------------------


@pytest.mark.parametrize(
    "kw",
    [
        dict(k=0.0),
        dict(k=-1.0),
        dict(delta_start=1e-5, delta_end=1e-1),
        dict(delta_end=0.0),
        dict(steps=1),
        dict(family="circular"),
    ],
)
def test_config_rejects_bad_values(kw):
    args = dict(f=PARABOLOID, k=1.0, delta_start=0.1, delta_end=1e-5, steps=5)
    args.update(kw)
    with pytest.raises(ValueError):
        SweepConfig(**args)


def test_schedule_is_geometric_with_exact_endpoints():
    ds = delta_schedule(1e-1, 1e-5, 9)
    assert ds[0] == 1e-1 and ds[-1] == 1e-5
    ratios = [b / a for a, b in zip(ds, ds[1:])]
    assert all(r == pytest.approx(10**-0.5, rel=1e-12) for r in ratios)


@pytest.mark.parametrize("family", FAMILIES)
def test_triangle_families_share_the_apex_and_area(family):
    a, b, c = triangle_points(family, Vector2(1, 2), 0.1, 0.01)
    assert a == Vector2(1, 2)
    area = 0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x)
    assert area == pytest.approx(-0.001, rel=1e-12)


# --- sweeps ---------------------------------------------------------------------------


def test_k1_collapses_to_horizontal_plane():
    rows = sweep(1)
    last = rows[-1]
    assert last.q.norm() <= 2.1e-5
    assert last.normal.distance((0, 0, -1)) <= 2.1e-5
    norms = [r.q_norm for r in rows]
    assert all(b < a for a, b in zip(norms, norms[1:]))
    assert classify_limit(rows).label == "zero"


def test_k2_settles_on_the_tilted_plane():
    rows = sweep(2)
    assert (rows[-1].q - Vector2(0, 1)).norm() <= 1e-8
    diagnosis = classify_limit(rows)
    assert diagnosis.label == "finite"
    assert "q ->" in diagnosis.describe()


def test_k3_diverges_and_the_normal_turns_horizontal():
    rows = sweep(3)
    norms = [r.q_norm for r in rows]
    assert all(b > a for a, b in zip(norms, norms[1:]))
    assert rows[-1].q_norm >= 1e4
    assert rows[-1].normal.distance((0, 1, 0)) <= 1e-4
    assert rows[-1].tangent_gap == pytest.approx(math.pi / 2, abs=1e-4)
    assert classify_limit(rows).label == "divergent"


@pytest.mark.parametrize("k", [1, 2, 3])
def test_rows_agree_with_the_closed_form(k):
    for r in sweep(k):
        assert r.eta == r.delta**k
        expected = (r.delta**2 + r.eta**2) / r.eta
        assert r.q.y == pytest.approx(expected, rel=1e-10)
        assert abs(r.q.x) <= 1e-10 * max(1.0, expected)
        assert 0.0 <= r.tangent_gap <= math.pi / 2


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_runs_off_origin(family):
    rows = sweep(2, x0=Vector2(0.5, -0.25), family=family, steps=5)
    assert len(rows) == 5
    assert [r.delta for r in rows] == sorted((r.delta for r in rows), reverse=True)
    assert all(not r.degenerate for r in rows)


def test_degenerate_rows_are_flagged_not_fatal():
    # 2 tau / edge^2 = eta / (2 delta) = delta^12 / 2 drops below 1e-12 at small delta
    rows = sweep(13, start=0.5, end=1e-2, steps=4)
    assert rows[0].degenerate is False
    assert rows[-1].degenerate is True
    row = rows[-1].as_row()
    assert math.isnan(row["qx"]) and math.isnan(row["nz"])
    assert row["degenerate"] is True


def test_disagreeing_formulas_raise(monkeypatch):
    from secantplane import paradox

    real = paradox.three_way

    def skewed(*samples):
        check = real(*samples)
        return type(check)(check.quotient + Vector2(1.0, 0.0), check.normal_combination, check.determinant, 0.0)

    monkeypatch.setattr(paradox, "three_way", skewed)
    cfg = SweepConfig(PARABOLOID, 1.0, 0.1, 0.01, 2)
    with pytest.raises(InvariantFailure):
        sweep_row(cfg, 0.1, PlaneNormal3(0.0, 0.0, -1.0))


# --- CSV re-ingestion ---------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_csv_is_loss_free(k):
    rows = sweep(k)
    buf = io.StringIO()
    write_csv([r.as_row() for r in rows], SweepRecord.FIELDS, buf)
    buf.seek(0)
    parsed = read_csv(buf)
    assert list(parsed[0]) == list(SweepRecord.FIELDS)
    for original, line in zip(rows, parsed):
        delta, eta = float(line["delta"]), float(line["eta"])
        assert (delta, eta) == (original.delta, original.eta)
        a, b, c = triangle_points("isosceles", Vector2(0, 0), delta, eta)
        q = q_quotient(*[SamplePoint(p, p.x * p.x + p.y * p.y) for p in (a, b, c)])
        assert (float(line["qx"]), float(line["qy"])) == (q.x, q.y)
        assert float(line["nz"]) == original.normal.nz
        assert line["degenerate"] == "false"


# --- classification -------------------------------------------------------------------------


def record(qy):
    q = Vector2(0.0, qy)
    return SweepRecord(1.0, 1.0, q, q.norm(), PlaneNormal3(0.0, 0.0, -1.0), 0.0)


@pytest.mark.parametrize(
    "first, second, label",
    [
        (1.0, 0.1, "zero"),
        (1.0, 0.0, "zero"),
        (1.0, 1.0 + 1e-9, "finite"),
        (1.0, 1.05, "undetermined"),
        (1.0, 3.0, "divergent"),
        (1.0, 1.5, "undetermined"),
    ],
)
def test_classify_limit(first, second, label):
    diagnosis = classify_limit([record(first), record(second)])
    assert diagnosis.label == label
    assert diagnosis.describe()


def test_classify_needs_two_usable_rows():
    assert classify_limit([record(1.0)]).label == "undetermined"


# --- strong derivative -------------------------------------------------------------------------


def test_square_converges_within_2h():
    report = run_strong_derivative(parse("x^2"), 1.0, [10.0**-i for i in range(1, 6)], 1000, seed=0)
    assert report.derivative == pytest.approx(2.0, abs=1e-9)
    for level in report.levels:
        assert level.trials == 1000
        assert level.max_error <= 2 * level.h


@given(st.integers(-2**20, 2**20), st.integers(-2**20, 2**20))
def test_affine_quotient_is_exact_when_samples_are(i, j):
    a, b = i / 1024, j / 1024
    if a == b:
        return
    assert diff_quotient_1d(3 * a - 2, 3 * b - 2, a, b) == 3.0


def test_affine_error_is_rounding_only():
    # no curvature term: what remains is sample rounding divided by |b - a|
    report = run_strong_derivative(parse("3*x - 2"), 0.7, [10.0**-i for i in range(1, 6)], 1000)
    assert report.derivative == pytest.approx(3.0, abs=1e-10)
    for level in report.levels:
        assert level.max_error <= 1e-6


def test_symmetric_minimum_has_zero_slope():
    report = run_strong_derivative(parse("x^2"), 0.0, [1e-1, 1e-3, 1e-5], 500)
    assert abs(report.derivative) <= 1e-12
    assert [lv.max_error <= 2 * lv.h for lv in report.levels] == [True] * 3


def test_strong_derivative_is_seeded():
    g = parse("x^3")
    a = run_strong_derivative(g, 0.5, [1e-2], 50, seed=11)
    b = run_strong_derivative(g, 0.5, [1e-2], 50, seed=11)
    assert a == b
    with pytest.raises(ValueError):
        run_strong_derivative(g, 0.5, [1e-2], 0)
