"""Shared helpers: random body generators and brute-force oracles.

Every oracle here recomputes a quantity from first principles with code that
shares nothing with the package implementation, so agreement is meaningful.
"""

import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from steinerlab.geometry import (
    ConvexPolygon,
    centroid,
    normalized_vertices,
    points_inside,
    translate,
)


def hull_polygon(points) -> ConvexPolygon:
    """Convex hull of a point cloud as a validated polygon."""
    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    return ConvexPolygon(normalized_vertices(pts[hull.vertices]))


def random_polygon(rng, n: int = 12, spread: float = 1.0) -> ConvexPolygon:
    """Hull of n gaussian points, recentered so the origin is interior."""
    k = hull_polygon(rng.normal(size=(n, 2)) * spread)
    return translate(k, -centroid(k))


def trapezoid_area(vertices) -> float:
    """Area by integrating y dx around the loop (Green's theorem)."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(-np.sum((xn - x) * (y + yn)) / 2.0)


def _dist_to_segments(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point (N,2) to each segment a->b (M,2), as (N,M)."""
    ab = b - a
    ap = pts[:, None, :] - a[None, :, :]
    denom = np.einsum("md,md->m", ab, ab)
    t = np.clip(np.einsum("nmd,md->nm", ap, ab) / denom, 0.0, 1.0)
    gap = ap - t[:, :, None] * ab[None, :, :]
    return np.hypot(gap[:, :, 0], gap[:, :, 1])


def dist_to_boundary(pts, q: ConvexPolygon) -> np.ndarray:
    """Euclidean distance from points to the body (0 for interior points)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    a = q.vertices
    b = np.roll(a, -1, axis=0)
    out = np.empty(len(pts))
    for lo in range(0, len(pts), 256):
        chunk = pts[lo : lo + 256]
        out[lo : lo + 256] = _dist_to_segments(chunk, a, b).min(axis=1)
    out[points_inside(q, pts)] = 0.0
    return out


def brute_hausdorff(p: ConvexPolygon, q: ConvexPolygon) -> float:
    """Hausdorff distance via vertex-to-boundary scans in both directions.

    For convex bodies the farthest point of P from Q is a vertex of P, so
    scanning vertices is exact, not an approximation.
    """
    return max(
        float(dist_to_boundary(p.vertices, q).max()),
        float(dist_to_boundary(q.vertices, p).max()),
    )


def chord_by_scanline(p: ConvexPolygon, point, angle: float, samples: int = 200_001) -> float:
    """Chord length measured by membership sampling along the line."""
    point = np.asarray(point, dtype=float)
    reach = float(np.hypot(*point)) + float(np.max(np.hypot(p.vertices[:, 0], p.vertices[:, 1])))
    t = np.linspace(-reach, reach, samples)
    d = np.array([math.cos(angle), math.sin(angle)])
    inside = points_inside(p, point[None, :] + t[:, None] * d[None, :])
    return float(inside.sum()) * (2.0 * reach / (samples - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
