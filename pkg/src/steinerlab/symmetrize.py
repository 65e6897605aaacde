"""Steiner symmetrization for the three body families.

The polygon routine is the workhorse: it rotates the body so the chord
direction is vertical, reads the upper and lower boundary chains, re-centers
every vertical chord on the horizontal axis, and rotates back. Segments and
ellipses have closed forms and are handled exactly.
"""
from __future__ import annotations

import math

import numpy as np

from .geometry import (
    CenteredEllipse,
    CenteredSegment,
    ConvexPolygon,
    Direction,
    area,
    normalized_vertices,
    rescale_to_area,
)

# Consecutive chain vertices closer than this fraction of the bounding-box
# diagonal (in the chord coordinate) are treated as one breakpoint.
TIE_REL = 1e-12


def _rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def _collapse_chain(xs: np.ndarray, ys: np.ndarray, keep_max: bool, tol: float):
    """Collapse near-tied x values in an ascending chain, keeping the extreme y."""
    out_x = [float(xs[0])]
    out_y = [float(ys[0])]
    for x, y in zip(xs[1:], ys[1:]):
        if x - out_x[-1] <= tol:
            if (y > out_y[-1]) if keep_max else (y < out_y[-1]):
                out_x[-1] = float(x)
                out_y[-1] = float(y)
        else:
            out_x.append(float(x))
            out_y.append(float(y))
    return np.array(out_x), np.array(out_y)


def steiner_polygon(p: ConvexPolygon, u: Direction) -> ConvexPolygon:
    """Steiner symmetral of a convex polygon with respect to chord direction u.

    The result is symmetric about the line through the origin perpendicular
    to u, has exactly the input area (the vertex cleanup pass can shave
    slivers of order 1e-12 of the area; a final rescale about the origin puts
    them back), and contains the same chord lengths at every station along
    the axis.
    """
    phi = 0.5 * math.pi - u.angle
    rot = _rotation(phi)
    v = p.vertices @ rot.T

    n = len(v)
    order = np.lexsort((v[:, 1], v[:, 0]))
    lo_i = int(order[0])
    hi_i = int(order[-1])

    idx_up = (hi_i + np.arange((lo_i - hi_i) % n + 1)) % n
    idx_lo = (lo_i + np.arange((hi_i - lo_i) % n + 1)) % n

    span = v.max(axis=0) - v.min(axis=0)
    tol = TIE_REL * float(math.hypot(span[0], span[1]))

    up = v[idx_up][::-1]
    lo = v[idx_lo]
    ux, uy = _collapse_chain(up[:, 0], up[:, 1], keep_max=True, tol=tol)
    lx, ly = _collapse_chain(lo[:, 0], lo[:, 1], keep_max=False, tol=tol)

    bx = np.sort(np.concatenate([ux, lx]))
    distinct = np.empty(len(bx), dtype=bool)
    distinct[0] = True
    np.greater(np.diff(bx), tol, out=distinct[1:])
    bx = bx[distinct]

    h = 0.5 * np.maximum(np.interp(bx, ux, uy) - np.interp(bx, lx, ly), 0.0)
    bottom = np.stack([bx, -h], axis=1)
    top = np.stack([bx[::-1], h[::-1]], axis=1)
    loop = np.concatenate([bottom, top]) @ rot

    a0 = area(p)
    out = rescale_to_area(normalized_vertices(loop, a0), a0)
    return ConvexPolygon(out)


def steiner_segment(seg: CenteredSegment, u: Direction) -> CenteredSegment:
    """Steiner symmetral of an origin-centered segment.

    A segment parallel to u is its own single chord and comes back unchanged.
    Otherwise every chord is a point and the symmetral is the projection of
    the segment onto the axis perpendicular to u; the length picks up the
    factor |cos| of the angle between the segment and that axis.
    """
    delta = math.remainder(seg.direction.angle - u.angle, math.pi)
    if abs(delta) < 1e-15:
        return seg
    axis = u.axis_angle
    length = seg.length * abs(math.cos(seg.direction.angle - axis))
    if axis >= math.pi:
        axis -= math.pi
    return CenteredSegment(Direction(axis), length)


def steiner_ellipse(e: CenteredEllipse, u: Direction) -> CenteredEllipse:
    """Steiner symmetral of a centered ellipse; the result is again an ellipse.

    In coordinates where u is vertical the form is a'x^2 + 2b'xy + c'y^2 <= 1;
    completing the square in y shows each vertical chord has half-length
    sqrt((1 - (a' - b'^2/c') x^2) / c') around a sheared midline, so dropping
    the cross term re-centers every chord: the symmetral form is
    (a' - b'^2/c', 0, c'). The determinant (hence the area) is unchanged.
    """
    phi = 0.5 * math.pi - u.angle
    rot = _rotation(phi)
    m = rot @ e.matrix @ rot.T
    a, b, c = m[0, 0], m[0, 1], m[1, 1]
    sym = np.array([[a - b * b / c, 0.0], [0.0, c]])
    back = rot.T @ sym @ rot
    return CenteredEllipse(back[0, 0], 0.5 * (back[0, 1] + back[1, 0]), back[1, 1])


def ellipse_from_axes(major: float, minor: float, phi: float = 0.0) -> CenteredEllipse:
    """Centered ellipse with the given semi-axes, major axis at angle phi."""
    if not (major > 0.0 and minor > 0.0):
        raise ValueError(f"semi-axes must be positive, got {major}, {minor}")
    if minor > major:
        major, minor = minor, major
        phi += 0.5 * math.pi
    ca, sa = math.cos(phi), math.sin(phi)
    inv_a2 = 1.0 / (major * major)
    inv_b2 = 1.0 / (minor * minor)
    return CenteredEllipse(
        ca * ca * inv_a2 + sa * sa * inv_b2,
        ca * sa * (inv_a2 - inv_b2),
        sa * sa * inv_a2 + ca * ca * inv_b2,
    )


def ellipse_axes(e: CenteredEllipse) -> tuple[float, float, float]:
    """Semi-major axis, semi-minor axis, and major-axis angle in [0, pi)."""
    a, b, c = e.a, e.b, e.c
    half_tr = 0.5 * (a + c)
    root = math.hypot(0.5 * (a - c), b)
    lam_min = half_tr - root
    lam_max = half_tr + root
    major = 1.0 / math.sqrt(lam_min)
    minor = 1.0 / math.sqrt(lam_max)
    if b == 0.0:
        phi = 0.0 if a <= c else 0.5 * math.pi
    else:
        phi = math.atan2(lam_min - a, b)
    phi %= math.pi
    return major, minor, phi
