"""Experiment drivers: iterated symmetrization runs, the three demos, traces.

A run folds a schedule over a body and records one TraceRow per step (row 0
is the untouched input). Demos wrap runs with the phenomenon-specific
bookkeeping and produce a DemoReport whose checks either all pass (exit 0 at
the CLI) or pinpoint what failed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import (
    CenteredBall,
    CenteredEllipse,
    CenteredSegment,
    ConvexPolygon,
    Direction,
    OriginNotInteriorError,
    area,
    cigar,
    contains,
    diameter,
    hausdorff,
    hausdorff_to_ball,
    origin_radius,
    polygonize,
)
from .schedules import (
    EndOfScheduleError,
    Schedule,
    SIX_OVER_PI2,
    cosine_product,
    dense_pool,
    greedy_step,
    next_direction,
    prime_angle,
)
from .symmetrize import ellipse_axes, steiner_ellipse, steiner_polygon, steiner_segment

TWO_PI = 2.0 * math.pi
# diverge demo: the cigar area must stay below this for the divergence floor
# (half the limiting segment length exceeds the equal-area ball radius)
MAX_CIGAR_AREA = 9.0 / math.pi**3

CSV_HEADER = "step,angle,area,origin_radius,diameter,hausdorff_to_ball"


@dataclass(frozen=True)
class TraceRow:
    """One step of a run; angle is None on the initial row."""

    step: int
    angle: float | None
    area: float
    origin_radius: float
    diameter: float
    hausdorff_to_ball: float


@dataclass(frozen=True)
class RunResult:
    rows: list[TraceRow]
    # True when the schedule ran out (explicit list exhausted, max_steps hit,
    # or greedy stalled at its pool cap) before the requested step count
    schedule_exhausted: bool = False


@dataclass(frozen=True)
class DemoCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class DemoReport:
    name: str
    params: dict
    rows: list[TraceRow]
    checks: list[DemoCheck]
    metrics: dict
    # optional per-step series beyond the standard trace columns
    series: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def volume_ball(p: ConvexPolygon) -> CenteredBall:
    """The origin-centered ball with the same area as P (the rounding target)."""
    return CenteredBall(math.sqrt(area(p) / math.pi))


def ball_distance(p: ConvexPolygon, ball: CenteredBall) -> float:
    """hausdorff_to_ball with the documented fallback when the origin is not interior."""
    try:
        return hausdorff_to_ball(p, ball)
    except OriginNotInteriorError:
        return hausdorff(p, polygonize(ball, 4096))


def _measure(step: int, ang: float | None, p: ConvexPolygon, ball: CenteredBall) -> TraceRow:
    return TraceRow(
        step=step,
        angle=ang,
        area=area(p),
        origin_radius=origin_radius(p),
        diameter=diameter(p),
        hausdorff_to_ball=ball_distance(p, ball),
    )


def run_schedule(
    k0: ConvexPolygon,
    schedule: Schedule,
    steps: int,
    on_step: Callable[[int, ConvexPolygon, float | None], None] | None = None,
) -> RunResult:
    """Apply `steps` schedule directions to k0, recording a TraceRow per step.

    The trace always starts with a step-0 row for the input itself. Runs stop
    early (with the exhausted marker) when an explicit schedule runs out of
    angles, when the schedule's max_steps is lower than `steps`, or when a
    greedy schedule can no longer improve at its largest allowed pool.
    """
    if steps < 0:
        raise ValueError("step count must be nonnegative")
    ball = volume_ball(k0)
    k = k0
    rows = [_measure(0, None, k, ball)]
    if on_step is not None:
        on_step(0, k, None)
    exhausted = False
    budget = steps
    if schedule.max_steps is not None and schedule.max_steps < steps:
        budget = schedule.max_steps
        exhausted = True

    if schedule.kind == "greedy":
        # Candidates are ranked on a vertex-capped copy, so near the optimum
        # the ranking can point slightly uphill. A step is only accepted when
        # the full-body objective does not increase; otherwise the body is
        # kept as-is and the pool grows, which makes greedy traces
        # non-increasing by construction and guarantees termination.
        pool_size = schedule.pool_init
        prev = _greedy_value(schedule.objective, k, ball)
        step = 1
        while step <= budget:
            pool = dense_pool(pool_size, schedule.pool_rule)
            u, candidate = greedy_step(k, pool, schedule.objective)
            val = _greedy_value(schedule.objective, candidate, ball)
            improved = False
            if val <= prev:
                k = candidate
                rows.append(_measure(step, u.angle, k, ball))
                if on_step is not None:
                    on_step(step, k, u.angle)
                improved = prev - val >= schedule.improve_tol * max(abs(prev), 1e-30)
                prev = val
                step += 1
            if not improved:
                if pool_size >= GREEDY_POOL_CAP:
                    exhausted = True
                    break
                pool_size = min(math.ceil(pool_size * schedule.pool_growth), GREEDY_POOL_CAP)
        return RunResult(rows, exhausted)

    state = 0
    for step in range(1, budget + 1):
        try:
            u, state = next_direction(schedule, state)
        except EndOfScheduleError:
            exhausted = True
            break
        k = steiner_polygon(k, u)
        rows.append(_measure(step, u.angle, k, ball))
        if on_step is not None:
            on_step(step, k, u.angle)
    return RunResult(rows, exhausted)


# a stalled greedy sweep at this pool size ends the run instead of growing further
GREEDY_POOL_CAP = 16384


def _greedy_value(objective: str, k: ConvexPolygon, ball: CenteredBall) -> float:
    return ball_distance(k, ball) if objective == "ball" else origin_radius(k)


# ---------------------------------------------------------------------------
# Demos
# ---------------------------------------------------------------------------

def _check(name: str, passed, detail: str) -> DemoCheck:
    return DemoCheck(name, bool(passed), detail)


def _area_check(rows: list[TraceRow]) -> DemoCheck:
    a0 = rows[0].area
    drift = max(abs(r.area - a0) for r in rows) / a0
    return _check("area constant", drift <= 1e-9, f"max relative drift {drift:.3e} (tol 1e-9)")


def _radius_check(rows: list[TraceRow]) -> DemoCheck:
    worst = max(
        (rows[i + 1].origin_radius - rows[i].origin_radius for i in range(len(rows) - 1)),
        default=0.0,
    )
    return _check(
        "origin radius non-increasing", worst <= 1e-9, f"max per-step increase {worst:.3e} (tol 1e-9)"
    )


def diverge_demo(
    eps: float,
    n: int,
    on_step: Callable[[int, ConvexPolygon, float | None], None] | None = None,
) -> DemoReport:
    """Iterate the prime-angle schedule on a thin cigar and verify it never rounds.

    The cigar is the rhombus of area eps whose long diagonal is the unit
    vertical segment. Each symmetral must still contain the symmetrized
    segment, whose exact length is the running cosine product; since that
    product stays above 6/pi^2 while the equal-area ball has radius
    sqrt(eps/pi), the distance to the ball keeps a positive floor whenever
    eps < 9/pi^3: the iteration provably goes nowhere.
    """
    if not 0.0 < eps < MAX_CIGAR_AREA:
        raise ValueError(
            f"cigar area must lie in (0, 9/pi^3 = {MAX_CIGAR_AREA:.17g}) "
            f"for the divergence floor to be positive, got {eps}"
        )
    if n < 100:
        raise ValueError(f"need at least 100 steps for a meaningful run, got {n}")

    seg = CenteredSegment(Direction(0.5 * math.pi), 1.0)
    k = cigar(seg, eps)
    ball = volume_ball(k)
    ball_r = ball.radius
    schedule = Schedule("prime")

    def seg_witness(s: CenteredSegment) -> ConvexPolygon:
        # a sliver rhombus standing in for the segment; thin enough to stay
        # within the containment tolerance, thick enough to be a valid polygon
        return polygonize(s, width=1e-9 * s.length)

    rows = [_measure(0, None, k, ball)]
    if on_step is not None:
        on_step(0, k, None)
    seg_lengths = [seg.length]
    contained = [contains(k, seg_witness(seg))]
    mid_body = None
    state = 0
    for step in range(1, n + 1):
        u, state = next_direction(schedule, state)
        k = steiner_polygon(k, u)
        seg = steiner_segment(seg, u)
        rows.append(_measure(step, u.angle, k, ball))
        if on_step is not None:
            on_step(step, k, u.angle)
        seg_lengths.append(seg.length)
        contained.append(contains(k, seg_witness(seg)))
        if step == n // 2:
            mid_body = k

    lengths = np.array(seg_lengths[1:])
    products = np.array([cosine_product(m) for m in range(1, n + 1)])
    recursion_err = float(np.max(np.abs(lengths - products)))

    diam = np.array([r.diameter for r in rows[1:]])
    dist = np.array([r.hausdorff_to_ball for r in rows[1:]])
    floor = 0.5 * lengths - ball_r
    winding = prime_angle(n)
    separation = hausdorff(mid_body, k) if mid_body is not None else float("nan")

    checks = [
        _area_check(rows),
        _radius_check(rows),
        _check(
            "diameter above segment length",
            bool(np.all(diam >= lengths - 1e-12)),
            f"min diameter-length margin {float(np.min(diam - lengths)):.3e}",
        ),
        _check(
            "segment length above 6/pi^2",
            bool(np.all(lengths > SIX_OVER_PI2)),
            f"min length {float(np.min(lengths)):.17g} vs {SIX_OVER_PI2:.17g}",
        ),
        _check(
            "segment contained in body",
            all(contained),
            f"{sum(contained)}/{len(contained)} steps contained",
        ),
        _check(
            "ball distance above floor",
            bool(np.all(dist >= floor - 1e-12)) and bool(np.all(floor > 0.0)),
            f"min distance {float(np.min(dist)):.8f}, min floor {float(np.min(floor)):.8f}",
        ),
        _check(
            "segment recursion exact",
            recursion_err <= 1e-12,
            f"max |composed - product| = {recursion_err:.3e} (tol 1e-12)",
        ),
    ]
    metrics = {
        "final_segment_length": float(lengths[-1]),
        "min_ball_distance": float(np.min(dist)),
        "distance_floor": float(np.min(floor)),
        "cumulative_angle": winding,
        "laps": winding / TWO_PI,
        "half_to_final_separation": separation,
        "final_vertices": len(k),
    }
    series = {
        "segment_length": [float(x) for x in seg_lengths],
        "distance_floor": [float("nan")] + [float(x) for x in floor],
    }
    return DemoReport("diverge", {"eps": eps, "steps": n}, rows, checks, metrics, series)


def gronchi_demo(
    ratio: float,
    n: int,
    power: float = 1.0,
    on_step: Callable[[int, CenteredEllipse, float | None], None] | None = None,
) -> DemoReport:
    """Rotate an eccentric ellipse with slowly decreasing increments.

    The increments 1/2, 1/3, ... are square-summable, which caps how much the
    ellipse can round, yet their sum diverges, so its major axis keeps
    turning: the shape never settles toward the ball. The trace rows are
    computed from the analytic ellipse (no polygons involved).
    """
    if ratio < 1.0:
        raise ValueError(f"axis ratio must be at least 1, got {ratio}")
    if n < 100:
        raise ValueError(f"need at least 100 steps for a meaningful run, got {n}")

    e = CenteredEllipse(1.0 / ratio**2, 0.0, 1.0)
    schedule = Schedule("gronchi", gronchi_power=power)
    if on_step is not None:
        on_step(0, e, None)

    def measure(step: int, ang: float | None, e: CenteredEllipse) -> TraceRow:
        major, minor, _ = ellipse_axes(e)
        r_vol = math.sqrt(e.area / math.pi)
        return TraceRow(
            step=step,
            angle=ang,
            area=e.area,
            origin_radius=major,
            diameter=2.0 * major,
            hausdorff_to_ball=max(major - r_vol, r_vol - minor),
        )

    rows = [measure(0, None, e)]
    ratios = [ellipse_axes(e)[0] / ellipse_axes(e)[1]]
    orientations = [ellipse_axes(e)[2]]
    dets = [e.det]
    state = 0
    for step in range(1, n + 1):
        u, state = next_direction(schedule, state)
        e = steiner_ellipse(e, u)
        rows.append(measure(step, u.angle, e))
        if on_step is not None:
            on_step(step, e, u.angle)
        major, minor, phi = ellipse_axes(e)
        ratios.append(major / minor)
        orientations.append(phi)
        dets.append(e.det)

    unwrapped = np.unwrap(np.array(orientations), period=math.pi)
    winding = float(abs(unwrapped[-1] - unwrapped[0]))
    det_drift = float(np.max(np.abs(np.array(dets) - dets[0])) / dets[0])
    min_ratio = float(np.min(ratios))

    checks = [
        _check(
            "form determinant constant",
            det_drift <= 1e-9,
            f"max relative drift {det_drift:.3e} (tol 1e-9)",
        ),
        _check(
            "area constant",
            max(abs(r.area - rows[0].area) for r in rows) / rows[0].area <= 1e-9,
            "ellipse area pi/sqrt(det) tracks the determinant",
        ),
    ]
    if ratio > 1.0:
        checks.append(
            _check(
                "never becomes a circle",
                min_ratio > 1.0,
                f"min axis ratio {min_ratio:.8f} stays above 1",
            )
        )
    else:
        checks.append(
            _check(
                "circle stays a circle",
                abs(min_ratio - 1.0) <= 1e-9 and max(ratios) <= 1.0 + 1e-9,
                f"axis ratio range [{min_ratio:.12f}, {max(ratios):.12f}]",
            )
        )
    metrics = {
        "min_axis_ratio": min_ratio,
        "final_axis_ratio": float(ratios[-1]),
        "orientation_winding": winding,
        "winding_laps": winding / TWO_PI,
    }
    series = {
        "axis_ratio": [float(x) for x in ratios],
        "orientation": [float(x) for x in orientations],
        "orientation_unwrapped": [float(x) for x in unwrapped],
    }
    return DemoReport("gronchi", {"ratio": ratio, "steps": n, "power": power}, rows, checks, metrics, series)


def random_demo(
    k0: ConvexPolygon,
    seed: int,
    n: int,
    on_step: Callable[[int, ConvexPolygon, float | None], None] | None = None,
) -> DemoReport:
    """Symmetrize along i.i.d. uniform directions and watch the body round off."""
    if n < 1:
        raise ValueError("need at least one step")
    result = run_schedule(k0, Schedule("random", seed=seed), n, on_step=on_step)
    rows = result.rows
    dist = np.array([r.hausdorff_to_ball for r in rows])
    r_vol = volume_ball(k0).radius
    head = dist[: max(1, len(dist) // 10)]
    tail = dist[-max(1, len(dist) // 10):]

    checks = [
        _area_check(rows),
        _radius_check(rows),
        _check(
            "distance trend decreasing",
            float(tail.mean()) <= float(head.mean()) + 1e-12,
            f"first-decile mean {float(head.mean()):.6e}, last-decile mean {float(tail.mean()):.6e}",
        ),
        _check(
            "final no farther than start",
            dist[-1] <= dist[0] + 1e-9,
            f"start {dist[0]:.6e}, final {dist[-1]:.6e}",
        ),
    ]
    metrics = {
        "initial_distance": float(dist[0]),
        "final_distance": float(dist[-1]),
        "final_distance_over_volume_radius": float(dist[-1] / r_vol),
        "volume_radius": r_vol,
    }
    return DemoReport("random", {"seed": seed, "steps": n}, rows, checks, metrics)


# ---------------------------------------------------------------------------
# Trace and report text formats
# ---------------------------------------------------------------------------

def format_trace(rows: list[TraceRow]) -> str:
    """CSV text for a trace: fixed header, 17 significant digits, one row per step.

    The step-0 row has no direction; its angle field is left empty.
    """
    out = [CSV_HEADER]
    for r in rows:
        ang = "" if r.angle is None else format(r.angle, ".17g")
        out.append(
            f"{r.step},{ang},{format(r.area, '.17g')},{format(r.origin_radius, '.17g')},"
            f"{format(r.diameter, '.17g')},{format(r.hausdorff_to_ball, '.17g')}"
        )
    return "\n".join(out) + "\n"


def write_trace(rows: list[TraceRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_trace(rows))


def render_report(report: DemoReport) -> str:
    """Human-readable report.txt content; stable ordering for diffing runs."""
    lines = [f"demo: {report.name}"]
    for key, val in report.params.items():
        lines.append(f"param {key} = {val}")
    lines.append("")
    for key, val in report.metrics.items():
        if isinstance(val, float):
            lines.append(f"{key} = {format(val, '.17g')}")
        else:
            lines.append(f"{key} = {val}")
    lines.append("")
    for c in report.checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    lines.append("")
    lines.append(f"result: {'all checks passed' if report.passed else 'CHECKS FAILED'}")
    return "\n".join(lines) + "\n"
