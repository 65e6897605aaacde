"""Experiment harness tests: traces, demos, and the CSV/report formats."""

import math

import numpy as np
import pytest

import steinerlab.experiments as experiments
from steinerlab.experiments import (
    CSV_HEADER,
    MAX_CIGAR_AREA,
    RunResult,
    TraceRow,
    ball_distance,
    diverge_demo,
    format_trace,
    gronchi_demo,
    random_demo,
    render_report,
    run_schedule,
    volume_ball,
    write_trace,
)
from steinerlab.geometry import CenteredBall, ConvexPolygon, hausdorff, polygonize, translate
from steinerlab.schedules import Schedule, prime_angle

SQUARE = ConvexPolygon([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
TWO_PI = 2.0 * math.pi


def test_volume_ball_of_square():
    assert volume_ball(SQUARE).radius == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-15)


def test_ball_distance_falls_back_when_origin_is_outside():
    shifted = translate(SQUARE, [5.0, 0.0])
    ball = CenteredBall(1.0)
    want = hausdorff(shifted, polygonize(ball, 4096))
    assert ball_distance(shifted, ball) == pytest.approx(want, abs=1e-12)
    # interior origin goes through the exact support identity
    assert ball_distance(SQUARE, ball) == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-15)


def test_run_schedule_zero_steps():
    result = run_schedule(SQUARE, Schedule("prime"), 0)
    assert len(result.rows) == 1
    assert result.rows[0].step == 0
    assert result.rows[0].angle is None
    assert not result.schedule_exhausted
    with pytest.raises(ValueError):
        run_schedule(SQUARE, Schedule("prime"), -1)


def test_run_schedule_prime_trace():
    seen = []
    result = run_schedule(SQUARE, Schedule("prime"), 5, on_step=lambda s, k, a: seen.append((s, a)))
    rows = result.rows
    assert [r.step for r in rows] == [0, 1, 2, 3, 4, 5]
    assert rows[0].angle is None
    for m in range(1, 6):
        assert rows[m].angle == pytest.approx(prime_angle(m) % TWO_PI, abs=1e-15)
        assert rows[m].area == pytest.approx(rows[0].area, rel=1e-12)
        assert rows[m].origin_radius <= rows[m - 1].origin_radius + 1e-9
        assert rows[m].diameter <= rows[m - 1].diameter + 1e-9
    assert seen == [(r.step, r.angle) for r in rows]
    assert not result.schedule_exhausted


def test_run_schedule_explicit_exhaustion():
    s = Schedule("explicit", angles=(0.3, 1.1))
    result = run_schedule(SQUARE, s, 5)
    assert len(result.rows) == 3
    assert result.schedule_exhausted
    full = run_schedule(SQUARE, s, 2)
    assert len(full.rows) == 3
    assert not full.schedule_exhausted


def test_run_schedule_respects_max_steps():
    result = run_schedule(SQUARE, Schedule("prime", max_steps=3), 10)
    assert len(result.rows) == 4
    assert result.schedule_exhausted
    result = run_schedule(SQUARE, Schedule("prime", max_steps=10), 3)
    assert len(result.rows) == 4
    assert not result.schedule_exhausted


def test_run_schedule_greedy_is_non_increasing():
    result = run_schedule(SQUARE, Schedule("greedy", pool_init=4), 8)
    dist = [r.hausdorff_to_ball for r in result.rows]
    assert all(b <= a + 1e-12 for a, b in zip(dist, dist[1:]))
    assert len(result.rows) <= 9


def test_run_schedule_greedy_stalls_at_pool_cap(monkeypatch):
    monkeypatch.setattr(experiments, "GREEDY_POOL_CAP", 64)
    result = run_schedule(SQUARE, Schedule("greedy", pool_init=4), 200)
    assert result.schedule_exhausted
    assert len(result.rows) < 201


def test_diverge_demo_rejects_fat_cigars():
    assert MAX_CIGAR_AREA == pytest.approx(9.0 / math.pi**3, abs=1e-17)
    with pytest.raises(ValueError, match="9/pi\\^3"):
        diverge_demo(0.30, 100)
    with pytest.raises(ValueError):
        diverge_demo(0.0, 100)
    with pytest.raises(ValueError):
        diverge_demo(-0.1, 100)
    with pytest.raises(ValueError):
        diverge_demo(0.1, 99)


def test_diverge_demo_near_threshold_still_diverges():
    # 0.29 sits just under the 9/pi^3 = 0.29026... cutoff
    rep = diverge_demo(0.29, 100)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "ball distance above floor" in names
    assert "segment recursion exact" in names
    assert rep.metrics["distance_floor"] > 0.0
    assert rep.metrics["min_ball_distance"] >= rep.metrics["distance_floor"] - 1e-12
    assert len(rep.series["segment_length"]) == 101
    assert len(rep.series["distance_floor"]) == 101
    assert rep.params == {"eps": 0.29, "steps": 100}


def test_gronchi_demo_keeps_turning():
    rep = gronchi_demo(10.0, 100)
    assert rep.passed
    assert rep.metrics["min_axis_ratio"] > 1.0
    assert rep.metrics["orientation_winding"] > 0.0
    assert len(rep.rows) == 101
    # determinant conservation is exact up to roundoff
    assert rep.checks[0].name == "form determinant constant"
    with pytest.raises(ValueError):
        gronchi_demo(0.5, 100)
    with pytest.raises(ValueError):
        gronchi_demo(10.0, 50)


def test_gronchi_demo_circle_stays_a_circle():
    rep = gronchi_demo(1.0, 100)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "circle stays a circle" in names
    assert rep.metrics["final_axis_ratio"] == pytest.approx(1.0, abs=1e-9)


def test_random_demo_is_deterministic_and_rounds():
    rep = random_demo(SQUARE, seed=3, n=200)
    assert rep.passed
    assert rep.metrics["final_distance"] < rep.metrics["initial_distance"]
    again = random_demo(SQUARE, seed=3, n=200)
    assert format_trace(again.rows) == format_trace(rep.rows)
    other = random_demo(SQUARE, seed=4, n=200)
    assert format_trace(other.rows) != format_trace(rep.rows)
    with pytest.raises(ValueError):
        random_demo(SQUARE, seed=3, n=0)


def test_format_trace_pins_the_csv_layout():
    rows = [
        TraceRow(0, None, 0.1, 0.5, 1.0, 0.25),
        TraceRow(1, math.pi, 0.1, 0.4, 0.9, 0.2),
    ]
    want = (
        "step,angle,area,origin_radius,diameter,hausdorff_to_ball\n"
        "0,,0.10000000000000001,0.5,1,0.25\n"
        "1,3.1415926535897931,0.10000000000000001,0.40000000000000002,"
        "0.90000000000000002,0.20000000000000001\n"
    )
    assert format_trace(rows) == want
    assert want.startswith(CSV_HEADER + "\n")


def test_write_trace_bytes(tmp_path):
    rows = [TraceRow(0, None, 4.0, math.sqrt(2.0), 2.0 * math.sqrt(2.0), 0.5)]
    path = tmp_path / "trace.csv"
    write_trace(rows, path)
    data = path.read_bytes()
    assert data == format_trace(rows).encode()
    assert b"\r" not in data


def test_render_report_layout():
    rep = gronchi_demo(2.0, 100)
    text = render_report(rep)
    lines = text.splitlines()
    assert lines[0] == "demo: gronchi"
    assert "param ratio = 2.0" in lines
    assert any(line.startswith("[PASS] form determinant constant") for line in lines)
    assert lines[-1] == "result: all checks passed"
    # floats render with the same 17 digit rule as the CSV
    assert f"min_axis_ratio = {format(rep.metrics['min_axis_ratio'], '.17g')}" in lines


def test_render_report_marks_failures():
    rep = gronchi_demo(2.0, 100)
    bad = experiments.DemoReport(
        rep.name, rep.params, rep.rows,
        [experiments.DemoCheck("sanity", False, "wrong on purpose")], rep.metrics,
    )
    text = render_report(bad)
    assert "[FAIL] sanity" in text
    assert text.rstrip().endswith("CHECKS FAILED")
    assert not bad.passed
