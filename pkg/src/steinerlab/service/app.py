"""FastAPI application exposing symmetrization, schedule runs, and demos.

Endpoints do no file I/O; they return polygons, CSV text, report text, and
SVG documents in the response body, and the CLI (or any other client)
decides where to put them. Domain errors map to 422 responses whose "error"
field names the failure class, so clients can distinguish bad geometry from
bad parameters without parsing prose.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..geometry import (
    CenteredEllipse,
    ConvexPolygon,
    Direction,
    GeometryError,
    InvalidPolygonError,
    PolygonFormatError,
    area,
    polygonize,
)
from ..schedules import ScheduleError
from ..experiments import (
    DemoReport,
    diverge_demo,
    format_trace,
    gronchi_demo,
    random_demo,
    render_report,
    run_schedule,
    volume_ball,
)
from ..svg import frame_extent, render_frame
from ..symmetrize import steiner_polygon
from .models import (
    CheckModel,
    DemoResponse,
    DivergeDemoRequest,
    FrameModel,
    GronchiDemoRequest,
    PolygonModel,
    RandomDemoRequest,
    RunRequest,
    RunResponse,
    SymmetrizeRequest,
    SymmetrizeResponse,
    TraceRowModel,
)

# vertex count for drawing analytic ellipses in demo frames
FRAME_ELLIPSE_VERTICES = 256


class FrameCollector:
    """Accumulate SVG frames from a run's step callback.

    Always keeps the first and the final frame; with `every` set, also every
    k-th step. The viewport is fixed from the initial body so frames are
    comparable. Bodies arriving as ellipses are polygonized lazily (only
    when a frame is actually rendered).
    """

    def __init__(self, every: int | None):
        self.every = every
        self.frames: list[FrameModel] = []
        self._ball = None
        self._extent = None
        self._pending = None

    def _draw(self, step: int, body, ang: float | None) -> FrameModel:
        if isinstance(body, CenteredEllipse):
            body = polygonize(body, FRAME_ELLIPSE_VERTICES)
        u = Direction(ang) if ang is not None else None
        if self._ball is None:
            self._ball = volume_ball(body)
            self._extent = frame_extent(body, self._ball)
        svg = render_frame(body, ball=self._ball, direction=u, extent=self._extent)
        return FrameModel(step=step, svg=svg)

    def note(self, step: int, body, ang: float | None) -> None:
        if step == 0 or (self.every is not None and step % self.every == 0):
            self.frames.append(self._draw(step, body, ang))
            self._pending = None
        else:
            self._pending = (step, body, ang)

    def finish(self) -> list[FrameModel]:
        if self._pending is not None:
            self.frames.append(self._draw(*self._pending))
            self._pending = None
        return self.frames


def _demo_response(report: DemoReport, collector: FrameCollector) -> DemoResponse:
    return DemoResponse(
        name=report.name,
        params=report.params,
        passed=report.passed,
        checks=[CheckModel(name=c.name, passed=c.passed, detail=c.detail) for c in report.checks],
        metrics=report.metrics,
        csv=format_trace(report.rows),
        report_text=render_report(report),
        frames=collector.finish(),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="steinerlab", version=__version__)

    @app.exception_handler(PolygonFormatError)
    async def _on_format(request, exc):
        return JSONResponse(status_code=422, content={"error": "format", "detail": str(exc)})

    @app.exception_handler(InvalidPolygonError)
    async def _on_invalid(request, exc):
        return JSONResponse(status_code=422, content={"error": "invalid_polygon", "detail": str(exc)})

    @app.exception_handler(GeometryError)
    async def _on_geometry(request, exc):
        return JSONResponse(status_code=422, content={"error": "geometry", "detail": str(exc)})

    @app.exception_handler(ScheduleError)
    async def _on_schedule(request, exc):
        return JSONResponse(status_code=422, content={"error": "schedule", "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _on_params(request, exc):
        return JSONResponse(status_code=422, content={"error": "params", "detail": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/symmetrize", response_model=SymmetrizeResponse)
    def symmetrize(req: SymmetrizeRequest) -> SymmetrizeResponse:
        p = req.polygon.to_polygon()
        u = Direction(req.angle)
        out = steiner_polygon(p, u)
        svg = None
        if req.include_svg:
            svg = render_frame(out, ball=volume_ball(out), direction=u, overlay=p)
        return SymmetrizeResponse(
            polygon=PolygonModel.from_polygon(out),
            angle=u.angle,
            area=area(out),
            svg=svg,
        )

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        k0 = req.body.to_polygon()
        schedule = req.schedule.to_schedule()
        # runs emit frames only on request; demos always keep first and last
        collector = FrameCollector(req.svg_every) if req.svg_every is not None else None
        result = run_schedule(
            k0, schedule, req.steps, on_step=collector.note if collector else None
        )
        return RunResponse(
            rows=[TraceRowModel(**row.__dict__) for row in result.rows],
            schedule_exhausted=result.schedule_exhausted,
            csv=format_trace(result.rows),
            frames=collector.finish() if collector else [],
        )

    @app.post("/demo/diverge", response_model=DemoResponse)
    def demo_diverge(req: DivergeDemoRequest) -> DemoResponse:
        collector = FrameCollector(req.svg_every)
        report = diverge_demo(req.eps, req.steps, on_step=collector.note)
        return _demo_response(report, collector)

    @app.post("/demo/gronchi", response_model=DemoResponse)
    def demo_gronchi(req: GronchiDemoRequest) -> DemoResponse:
        collector = FrameCollector(req.svg_every)
        report = gronchi_demo(req.ratio, req.steps, req.power, on_step=collector.note)
        return _demo_response(report, collector)

    @app.post("/demo/random", response_model=DemoResponse)
    def demo_random(req: RandomDemoRequest) -> DemoResponse:
        k0 = req.body.to_polygon()
        collector = FrameCollector(req.svg_every)
        report = random_demo(k0, req.seed, req.steps, on_step=collector.note)
        return _demo_response(report, collector)

    return app
