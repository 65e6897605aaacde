"""Request and response shapes for the symmetrization service."""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..geometry import (
    CenteredSegment,
    ConvexPolygon,
    Direction,
    cigar,
    polygon_from_obj,
    polygonize,
)
from ..schedules import Schedule
from ..symmetrize import ellipse_from_axes

ELLIPSE_BODY_VERTICES = 4096


class PolygonModel(BaseModel):
    vertices: list[tuple[float, float]] = Field(min_length=3)

    @classmethod
    def from_polygon(cls, p: ConvexPolygon) -> "PolygonModel":
        return cls(vertices=[(float(x), float(y)) for x, y in p.vertices])

    def to_polygon(self) -> ConvexPolygon:
        return polygon_from_obj({"vertices": [list(v) for v in self.vertices]})


class BodySpecModel(BaseModel):
    """A named starting body: square | rhombus (eps) | ellipse (a,b,phi) | polygon."""

    kind: Literal["square", "rhombus", "ellipse", "polygon"] = "square"
    eps: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    phi: float = 0.0
    vertices: Optional[list[tuple[float, float]]] = None

    @model_validator(mode="after")
    def _required_fields(self):
        if self.kind == "rhombus" and self.eps is None:
            raise ValueError("rhombus body needs eps, the rhombus area")
        if self.kind == "ellipse" and (self.a is None or self.b is None):
            raise ValueError("ellipse body needs both semi-axes a and b")
        if self.kind == "polygon" and not self.vertices:
            raise ValueError("polygon body needs a vertex list")
        return self

    def to_polygon(self) -> ConvexPolygon:
        if self.kind == "square":
            return ConvexPolygon([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
        if self.kind == "rhombus":
            return cigar(CenteredSegment(Direction(0.5 * math.pi), 1.0), self.eps)
        if self.kind == "ellipse":
            return polygonize(ellipse_from_axes(self.a, self.b, self.phi), ELLIPSE_BODY_VERTICES)
        return polygon_from_obj({"vertices": [list(v) for v in self.vertices]})


class ScheduleModel(BaseModel):
    kind: Literal["prime", "gronchi", "random", "greedy", "explicit"] = "prime"
    seed: int = 0
    gronchi_power: float = 1.0
    angles: list[float] = Field(default_factory=list)
    objective: Literal["ball", "radius"] = "ball"
    pool_rule: Literal["prime", "vdc"] = "prime"
    pool_init: int = 32
    pool_growth: float = 2.0
    improve_tol: float = 1e-6
    max_steps: Optional[int] = None

    def to_schedule(self) -> Schedule:
        return Schedule(
            kind=self.kind,
            seed=self.seed,
            gronchi_power=self.gronchi_power,
            angles=tuple(self.angles),
            objective=self.objective,
            pool_rule=self.pool_rule,
            pool_init=self.pool_init,
            pool_growth=self.pool_growth,
            improve_tol=self.improve_tol,
            max_steps=self.max_steps,
        )


class TraceRowModel(BaseModel):
    step: int
    angle: Optional[float] = None
    area: float
    origin_radius: float
    diameter: float
    hausdorff_to_ball: float


class FrameModel(BaseModel):
    step: int
    svg: str


class SymmetrizeRequest(BaseModel):
    polygon: PolygonModel
    angle: float
    include_svg: bool = False


class SymmetrizeResponse(BaseModel):
    polygon: PolygonModel
    # the applied direction angle, normalized into [0, 2*pi)
    angle: float
    area: float
    svg: Optional[str] = None


class RunRequest(BaseModel):
    body: BodySpecModel = Field(default_factory=BodySpecModel)
    schedule: ScheduleModel = Field(default_factory=ScheduleModel)
    steps: int = Field(ge=0)
    # emit an SVG frame every k accepted steps (always including first and last)
    svg_every: Optional[int] = Field(default=None, ge=1)


class RunResponse(BaseModel):
    rows: list[TraceRowModel]
    schedule_exhausted: bool
    csv: str
    frames: list[FrameModel] = Field(default_factory=list)


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class DemoResponse(BaseModel):
    name: str
    params: dict
    passed: bool
    checks: list[CheckModel]
    metrics: dict
    csv: str
    report_text: str
    frames: list[FrameModel] = Field(default_factory=list)


class DivergeDemoRequest(BaseModel):
    eps: float = 0.1
    steps: int = 2000
    svg_every: Optional[int] = Field(default=None, ge=1)


class GronchiDemoRequest(BaseModel):
    ratio: float = 10.0
    steps: int = 10000
    power: float = 1.0
    svg_every: Optional[int] = Field(default=None, ge=1)


class RandomDemoRequest(BaseModel):
    body: BodySpecModel = Field(default_factory=BodySpecModel)
    seed: int = 1
    steps: int = 1000
    svg_every: Optional[int] = Field(default=None, ge=1)
