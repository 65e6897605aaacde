"""Small deterministic SVG writer for geometry snapshots.

Frames draw the body, the equal-area centered circle, and the current
direction (the direction itself dashed, its symmetry axis solid). The
viewport is fixed from the initial body so successive frames of a run are
comparable. Output contains no timestamps and formats every coordinate with
%.6g, so identical inputs give identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import CenteredBall, ConvexPolygon, Direction, simplify

# bodies are thinned to this many vertices before drawing; frames are for
# eyeballs, not measurement, and full traces keep the exact numbers
MAX_DRAWN_VERTICES = 1024

_BODY_STYLE = 'fill="#9ecae1" fill-opacity="0.55" stroke="#3182bd" stroke-width="1"'
_OVERLAY_STYLE = 'fill="none" stroke="#aaaaaa" stroke-width="1"'
_BALL_STYLE = 'fill="none" stroke="#777777" stroke-width="1" stroke-dasharray="5 4"'
_AXIS_STYLE = 'stroke="#d62728" stroke-width="1"'
_DIR_STYLE = 'stroke="#ff9933" stroke-width="1" stroke-dasharray="2 3"'


def _fmt(x: float) -> str:
    s = format(float(x), ".6g")
    return "0" if s == "-0" else s


def _points(vertices: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in vertices)


def frame_extent(p: ConvexPolygon, ball: CenteredBall | None = None) -> float:
    """Half-width of an origin-centered square viewport that fits p (and ball)."""
    m = float(np.max(np.abs(p.vertices)))
    if ball is not None:
        m = max(m, ball.radius)
    return 1.15 * m


def render_frame(
    body: ConvexPolygon,
    *,
    ball: CenteredBall | None = None,
    direction: Direction | None = None,
    overlay: ConvexPolygon | None = None,
    extent: float | None = None,
    size: int = 480,
) -> str:
    """Return a complete SVG document for one snapshot.

    `overlay` is drawn as an unfilled outline behind the body (used by the
    symmetrize command to show the input body under its symmetral). `extent`
    pins the viewport half-width; by default it is computed from this frame's
    own contents.
    """
    if extent is None:
        extent = frame_extent(body, ball)
        if overlay is not None:
            extent = max(extent, frame_extent(overlay, None))
    e = float(extent)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{size}" height="{size}" '
        f'viewBox="{_fmt(-e)} {_fmt(-e)} {_fmt(2 * e)} {_fmt(2 * e)}">',
        # flip y so the math convention (y up) matches the picture
        '<g transform="scale(1,-1)">',
    ]
    if ball is not None:
        parts.append(f'<circle cx="0" cy="0" r="{_fmt(ball.radius)}" {_BALL_STYLE}/>')
    if overlay is not None:
        ov = overlay if len(overlay.vertices) <= MAX_DRAWN_VERTICES else simplify(overlay, MAX_DRAWN_VERTICES)
        parts.append(f'<polygon points="{_points(ov.vertices)}" {_OVERLAY_STYLE}/>')
    drawn = body if len(body.vertices) <= MAX_DRAWN_VERTICES else simplify(body, MAX_DRAWN_VERTICES)
    parts.append(f'<polygon points="{_points(drawn.vertices)}" {_BODY_STYLE}/>')
    if direction is not None:
        dx, dy = direction.vector
        ax, ay = math.cos(direction.axis_angle), math.sin(direction.axis_angle)
        parts.append(
            f'<line x1="{_fmt(-e * ax)}" y1="{_fmt(-e * ay)}" '
            f'x2="{_fmt(e * ax)}" y2="{_fmt(e * ay)}" {_AXIS_STYLE}/>'
        )
        parts.append(
            f'<line x1="{_fmt(-e * dx)}" y1="{_fmt(-e * dy)}" '
            f'x2="{_fmt(e * dx)}" y2="{_fmt(e * dy)}" {_DIR_STYLE}/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
