"""Planar convex bodies and the metric operations the rest of the package builds on.

All types are immutable values and every operation is a pure function, so
everything here is safe to call concurrently on independent data.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Vertices closer than this (absolute distance) are merged during normalization.
MERGE_TOL = 1e-12
# Collinear-vertex drop threshold, as a fraction of scale**2 (scale = bbox diagonal).
COLLINEAR_REL = 1e-12


class GeometryError(ValueError):
    """Base class for geometric precondition failures."""


class InvalidPolygonError(GeometryError):
    """Vertex list does not describe a valid strictly convex CCW polygon."""


class OriginNotInteriorError(GeometryError):
    """Raised where a formula needs the origin strictly inside the body."""


class PolygonFormatError(GeometryError):
    """Polygon file could not be parsed; message carries a line/field diagnostic."""


@dataclass(frozen=True)
class Direction:
    """Unit vector in the plane, stored as an angle in radians, normalized to [0, 2pi)."""

    angle: float

    def __post_init__(self):
        a = float(self.angle)
        if not math.isfinite(a):
            raise GeometryError(f"direction angle must be finite, got {a!r}")
        a = math.fmod(a, TWO_PI)
        if a < 0.0:
            a += TWO_PI
        object.__setattr__(self, "angle", a)

    @property
    def vector(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    @property
    def axis_angle(self) -> float:
        """Angle of the line u-perp (the symmetry axis through the origin)."""
        return Direction(self.angle + 0.5 * math.pi).angle

    @classmethod
    def from_vector(cls, x: float, y: float) -> "Direction":
        if x == 0.0 and y == 0.0:
            raise GeometryError("zero vector has no direction")
        return cls(math.atan2(y, x))


@dataclass(frozen=True)
class CenteredSegment:
    """Origin-centered segment {t*(cos a, sin a) : |t| <= length/2}."""

    direction: Direction
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length >= 0.0):
            raise GeometryError(f"segment length must be nonnegative, got {self.length!r}")

    @property
    def endpoints(self) -> np.ndarray:
        half = 0.5 * self.length * self.direction.vector
        return np.array([half, -half])


@dataclass(frozen=True)
class CenteredBall:
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise GeometryError(f"ball radius must be nonnegative, got {self.radius!r}")


@dataclass(frozen=True)
class CenteredEllipse:
    """Origin-symmetric ellipse {x : a*x^2 + 2b*xy + c*y^2 <= 1}.

    The quadratic form must be positive definite: a > 0 and a*c - b^2 > 0.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise GeometryError("ellipse form entries must be finite")
        if self.a <= 0.0 or self.a * self.c - self.b * self.b <= 0.0:
            raise GeometryError(
                f"ellipse form ({self.a}, {self.b}, {self.c}) is not positive definite"
            )

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.c]])

    @property
    def det(self) -> float:
        return self.a * self.c - self.b * self.b

    @property
    def area(self) -> float:
        return math.pi / math.sqrt(self.det)


@dataclass(frozen=True)
class Line:
    """Infinite line through `point` with the given direction."""

    point: tuple[float, float]
    direction: Direction


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Construction validates the invariants (>= 3 vertices, no near-duplicate
    consecutive vertices, every turn strictly left); the vertex array is
    frozen afterwards.
    """

    __slots__ = ("_vertices",)

    def __init__(self, vertices):
        arr = np.array(vertices, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InvalidPolygonError(f"expected an (n, 2) vertex array, got shape {arr.shape}")
        if arr.shape[0] < 3:
            raise InvalidPolygonError(f"polygon needs at least 3 vertices, got {arr.shape[0]}")
        if not np.isfinite(arr).all():
            raise InvalidPolygonError("vertex coordinates must be finite")
        edges = np.roll(arr, -1, axis=0) - arr
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        if (lengths <= MERGE_TOL).any():
            i = int(np.argmin(lengths))
            raise InvalidPolygonError(f"vertices {i} and {(i + 1) % len(arr)} nearly coincide")
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        tol = COLLINEAR_REL * _scale_of(arr) ** 2
        if (cross <= tol).any():
            i = int(np.argmin(cross))
            raise InvalidPolygonError(
                f"vertices must be strictly convex and counterclockwise "
                f"(turn at vertex {(i + 1) % len(arr)} has cross product {cross[i]:.3e})"
            )
        arr.setflags(write=False)
        self._vertices = arr

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon({len(self)} vertices, area={area(self):.6g})"

    @property
    def scale(self) -> float:
        """Bounding-box diagonal; the reference length for relative tolerances."""
        return _scale_of(self._vertices)


def _scale_of(arr: np.ndarray) -> float:
    span = arr.max(axis=0) - arr.min(axis=0)
    return float(math.hypot(span[0], span[1]))


def _alternate_in_runs(bad: np.ndarray) -> np.ndarray:
    """Select every other element of each run of True values (circularly).

    Dropping two adjacent vertices in one sweep loses more area than their
    individual corner triangles (the second cross product is measured against
    an already-removed neighbor), so normalization only ever removes an
    alternating subset per pass and re-measures in between.
    """
    n = len(bad)
    if bad.all():
        return np.arange(n) % 2 == 0
    shift = int(np.argmin(bad))  # rotate a False to the front so runs don't wrap
    b = np.roll(bad, -shift)
    idx = np.arange(n)
    starts = b & ~np.roll(b, 1)
    run_start = np.maximum.accumulate(np.where(starts, idx, 0))
    pick = b & ((idx - run_start) % 2 == 0)
    return np.roll(pick, shift)


def _loop_area(pts: np.ndarray) -> float:
    """Shoelace area of a raw vertex loop (no convexity assumptions)."""
    nxt = np.roll(pts, -1, axis=0)
    return 0.5 * float(np.sum(pts[:, 0] * nxt[:, 1] - nxt[:, 0] * pts[:, 1]))


def _drop_flat_vertices(
    pts: np.ndarray, cross: np.ndarray, tol: float, norm_cap: float, debt: float
) -> np.ndarray:
    """Remove one round of near-collinear vertices with near-zero net area change.

    Each selected flat vertex either gets plainly cut, which LOSES its corner
    triangle, or is extended: the vertex and its successor are replaced by the
    intersection of the two outer edge lines, which ADDS the sliver between
    the old corner and the new one. Extensions are applied tallest-restoration
    first until they cover the pass's cut losses plus `debt`, the area the
    loop is short of its goal on entry. Compensation never overshoots, so the
    area-restoring rescale afterwards never shrinks the body (shrinking would
    slowly pull extreme points inside bodies they must contain) and measuring
    the deficit fresh each pass keeps what the rescale inflates far below one
    step's radius tolerance (one-sided inflation is what breaks radius
    monotonicity on big polygons).

    `norm_cap` is the max vertex norm of the loop this normalization started
    from: extensions may rebuild previously trimmed extreme corners out to
    that radius (a thin body's tip is exactly such a corner) but never past
    it, so the origin radius cannot grow across a symmetrization step.

    Replacements only reference original edge lines, so all of one pass's ops
    are mutually consistent; odd members of a flat run wait for the next pass
    rather than being measured against an already-modified neighbor.
    """
    n = len(pts)
    flat = cross <= tol
    shift = int(np.argmin(flat))  # rotate a non-flat vertex to the front
    b = np.roll(flat, -shift)
    p = np.roll(pts, -shift, axis=0)
    c = np.roll(cross, -shift)
    idx = np.arange(n)
    starts = b & ~np.roll(b, 1)
    run_start = np.maximum.accumulate(np.where(starts, idx, 0))
    pos = idx - run_start
    head = b & (pos % 2 == 0)  # every other flat in a run, odd flats wait a pass

    remove = np.zeros(n, dtype=bool)
    newp = p.copy()
    target = debt
    hi = np.flatnonzero(head)
    if len(hi):
        bcur = p[hi]
        prv = p[hi - 1]  # hi >= 1 because position 0 is not flat
        cnx = p[(hi + 1) % n]
        nxt = p[(hi + 2) % n]
        e1 = bcur - prv
        e4 = nxt - cnx
        g = cnx - bcur
        denom = e1[:, 0] * e4[:, 1] - e1[:, 1] * e4[:, 0]
        safe = np.where(denom > 0.0, denom, 1.0)
        t = (g[:, 0] * e4[:, 1] - g[:, 1] * e4[:, 0]) / safe
        s = (g[:, 0] * e1[:, 1] - g[:, 1] * e1[:, 0]) / safe
        x = bcur + t[:, None] * e1
        # area added by moving the corner out to x (positive = outward)
        added = -0.5 * ((cnx[:, 0] - bcur[:, 0]) * (x[:, 1] - bcur[:, 1])
                        - (cnx[:, 1] - bcur[:, 1]) * (x[:, 0] - bcur[:, 0]))
        ok = (
            (denom > 0.0)
            & (t >= 0.0)
            & (s <= 0.0)
            & (added >= 0.0)
            & (added <= tol)
            & (np.hypot(x[:, 0], x[:, 1]) <= norm_cap)
        )
        # cutting a candidate instead of extending it loses its corner triangle
        pair_loss = 0.5 * c[hi]
        target += float(pair_loss.sum())
        glen = np.hypot(g[:, 0], g[:, 1])
        order = np.argsort(-(2.0 * added / glen))  # tallest restored corner first
        order = order[ok[order]]
        gain = added[order] + pair_loss[order]  # extending both adds and un-loses
        cum = np.cumsum(gain)

        # a cut right after an extension loses (1 - s) times its triangle: the
        # new corner sits on the follower's entry edge line, farther away than
        # the old neighbour. Charge that overhang and re-pick to a fixed point.
        fol = (hi + 2) % n
        fol_cand = head[fol]
        fol_slot = np.minimum(np.searchsorted(hi, fol), len(hi) - 1)
        overhang = np.where(fol_cand, np.maximum(-s, 0.0) * 0.5 * c[fol], 0.0)
        base = int(np.searchsorted(cum, target, side="right"))
        k = base
        for _ in range(6):
            chosen_mask = np.zeros(len(hi), dtype=bool)
            chosen_mask[order[:k]] = True
            charged = chosen_mask & fol_cand & ~chosen_mask[fol_slot]
            extra = float(overhang[charged].sum())
            k2 = int(np.searchsorted(cum, target + extra, side="right"))
            if k2 == k:
                break
            k = k2
        else:
            k = base  # no fixed point: the uncharged pick never overshoots
        chosen = order[:k]
        newp[hi[chosen]] = x[chosen]
        remove[(hi[chosen] + 1) % n] = True
        demoted = np.ones(len(hi), dtype=bool)
        demoted[chosen] = False
        remove[hi[demoted]] = True
    return newp[~remove]


def _normalize_once(pts: np.ndarray, norm_cap: float, goal: float) -> np.ndarray:
    """One full merge-and-drop sweep aiming the extensions at area `goal`."""
    for _ in range(200):
        if len(pts) < 3:
            raise InvalidPolygonError("polygon degenerated during normalization")
        d = np.hypot(*(np.roll(pts, -1, axis=0) - pts).T)
        short = d <= MERGE_TOL
        if short.any():
            # edge i -> i+1 too short: drop vertex i+1 (alternating within runs)
            pts = pts[~np.roll(_alternate_in_runs(short), 1)]
            continue
        prv = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        e_in = pts - prv
        e_out = nxt - pts
        cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
        tol = COLLINEAR_REL * _scale_of(pts) ** 2
        flat = cross <= tol
        if not flat.any():
            return pts
        if flat.all():
            pts = pts[~_alternate_in_runs(flat)]
        else:
            pts = _drop_flat_vertices(pts, cross, tol, norm_cap, goal - _loop_area(pts))
    raise InvalidPolygonError("normalization did not converge")


def normalized_vertices(raw, target_area: float | None = None) -> np.ndarray:
    """Merge near-duplicate consecutive vertices and drop non-convex-turn vertices.

    Accepts a raw CCW vertex loop (as produced by the symmetrization sweep) and
    returns an array that satisfies the ConvexPolygon invariants. Each removal
    changes the area by at most the collinearity tolerance, and cuts and edge
    extensions roughly cancel; when `target_area` is given the extensions aim
    to make up the loop's full deficit against it, never overshooting it.
    Raises InvalidPolygonError if fewer than 3 vertices survive.

    A sweep lands slightly short of its goal (a cut next to an extension loses
    a bit more than the selection model charges for it, never less), so when
    the shortfall is worth chasing the sweep reruns on the original loop with
    the goal raised by the measured amount; the result kept is the closest to
    the true goal from below.
    """
    pts = np.array(raw, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidPolygonError(f"expected an (n, 2) vertex array, got shape {pts.shape}")
    # edge extensions may restore trimmed extreme corners up to the radius the
    # loop came in with, but no further (slack covers intersection roundoff)
    norm_cap = (1.0 + 1e-13) * float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
    goal = _loop_area(pts) if target_area is None else target_area
    # a leftover shortfall inflates the rescale by short / (2 area), which
    # moves the farthest vertex by about short * radius / (2 area): budget it
    # at a tenth of the per-step radius tolerance
    enough = 2e-10 * abs(goal) / max(norm_cap, 1e-300)
    noise = 1e-15 * abs(goal)
    best = None
    best_short = math.inf
    boost = 0.0
    for _ in range(4):
        out = _normalize_once(pts, norm_cap, goal + boost)
        short = goal - _loop_area(out)
        # only a shortfall is acceptable: the rescale afterwards must not shrink
        if -noise <= short < best_short:
            best = out
            best_short = short
            if short <= enough:
                break
        boost += short
    return out if best is None else best


def area(p: ConvexPolygon) -> float:
    """Shoelace area; strictly positive by the polygon invariants."""
    v = p.vertices
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


def centroid(p: ConvexPolygon) -> np.ndarray:
    v = p.vertices
    w = np.roll(v, -1, axis=0)
    cr = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
    a = 0.5 * float(np.sum(cr))
    cx = float(np.sum((v[:, 0] + w[:, 0]) * cr)) / (6.0 * a)
    cy = float(np.sum((v[:, 1] + w[:, 1]) * cr)) / (6.0 * a)
    return np.array([cx, cy])


def origin_radius(p: ConvexPolygon) -> float:
    """max |x| over the body; attained at a vertex."""
    v = p.vertices
    return float(np.max(np.hypot(v[:, 0], v[:, 1])))


def diameter(p: ConvexPolygon) -> float:
    """Maximum pairwise vertex distance.

    Small polygons use the plain quadratic vertex scan. Large ones restrict
    the scan to antipodal vertex pairs, found by intersecting normal cones on
    the unwrapped edge-angle axis; the candidate set always contains every
    antipodal pair (windows are padded), so the maximum is still exact.
    """
    v = p.vertices
    if len(v) <= 1024:
        d2 = ((v[:, None, :] - v[None, :, :]) ** 2).sum(axis=2)
        return float(math.sqrt(d2.max()))
    return _antipodal_diameter(v)


def _antipodal_diameter(v: np.ndarray) -> float:
    n = len(v)
    e = np.roll(v, -1, axis=0) - v
    ang = np.arctan2(e[:, 1], e[:, 0])
    # exterior turns lie in (0, pi) for a strictly convex CCW polygon, so the
    # mod-2pi difference of consecutive edge angles recovers them exactly
    turns = np.mod(np.diff(ang), TWO_PI)
    phi = np.concatenate([[ang[0]], ang[0] + np.cumsum(turns)])
    # vertex i is extreme exactly for edge angles in [lo[i], hi[i]]
    lo = np.concatenate([[phi[-1] - TWO_PI], phi[:-1]])
    hi = phi
    best = 0.0
    for shift in (math.pi, -math.pi):
        jmin = np.searchsorted(hi, lo - shift, side="left") - 1
        jmax = np.searchsorted(lo, hi - shift, side="right")
        np.clip(jmin, 0, n - 1, out=jmin)
        np.clip(jmax, 0, n - 1, out=jmax)
        counts = np.maximum(jmax - jmin + 1, 0)
        total = int(counts.sum())
        i_idx = np.repeat(np.arange(n), counts)
        j_idx = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts) + np.repeat(jmin, counts)
        d2 = ((v[i_idx] - v[j_idx]) ** 2).sum(axis=1)
        if total:
            best = max(best, float(d2.max()))
    return math.sqrt(best)


def support(p: ConvexPolygon, u: Direction) -> float:
    """Support function h_P(u) = max_x <x, u>."""
    return float(np.max(p.vertices @ u.vector))


def _support_normals(v: np.ndarray) -> tuple[np.ndarray, int]:
    """Outward edge normal angles rolled to start at the smallest one.

    For a CCW convex polygon the rolled sequence is increasing, and vertex
    (j + shift) % n attains the support maximum for directions between
    normals j-1 and j.
    """
    e = np.roll(v, -1, axis=0) - v
    ang = np.arctan2(-e[:, 0], e[:, 1])
    shift = int(np.argmin(ang))
    return np.roll(ang, -shift), shift


def _active_vertices(v: np.ndarray, ang: np.ndarray, shift: int, phi: np.ndarray) -> np.ndarray:
    j = np.searchsorted(ang, phi, side="left")
    return v[(j + shift) % len(v)]


def hausdorff(p: ConvexPolygon, q: ConvexPolygon) -> float:
    """Hausdorff distance between two convex polygons.

    For convex bodies this equals the sup over unit directions of the
    difference of support functions. Between consecutive edge normals of
    either polygon the active vertex pair is fixed and the difference is one
    cosine wave, so the sup sits at an arc endpoint or at the wave's phase
    angle when the arc contains it. Runs in O((n+m) log(n+m)).
    """
    pv, qv = p.vertices, q.vertices
    pa, ps = _support_normals(pv)
    qa, qs = _support_normals(qv)
    th = np.sort(np.concatenate([pa, qa]))
    hi = np.concatenate([th[1:], [th[0] + 2.0 * math.pi]])
    mid = 0.5 * (th + hi)
    wrapped = np.mod(mid + math.pi, 2.0 * math.pi) - math.pi
    d = _active_vertices(pv, pa, ps, wrapped) - _active_vertices(qv, qa, qs, wrapped)
    cos_lo, sin_lo = np.cos(th), np.sin(th)
    cos_hi, sin_hi = np.cos(hi), np.sin(hi)
    best = 0.0
    for sign in (1.0, -1.0):
        dd = sign * d
        ends = np.maximum(dd[:, 0] * cos_lo + dd[:, 1] * sin_lo,
                          dd[:, 0] * cos_hi + dd[:, 1] * sin_hi)
        phase = np.arctan2(dd[:, 1], dd[:, 0])
        phase = th[0] + np.mod(phase - th[0], 2.0 * math.pi)
        interior = (phase >= th) & (phase <= hi)
        vals = np.where(interior, np.hypot(dd[:, 0], dd[:, 1]), ends)
        best = max(best, float(vals.max()))
    return best


def origin_edge_distances(p: ConvexPolygon) -> np.ndarray:
    """Signed distance from the origin to each edge line; all positive iff origin is interior."""
    v = p.vertices
    w = np.roll(v, -1, axis=0)
    num = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
    return num / np.hypot(*(w - v).T)


def hausdorff_to_ball(p: ConvexPolygon, ball: CenteredBall) -> float:
    """Hausdorff distance to an origin-centered ball via the support-function identity.

    Requires the origin strictly inside P: then sup_u |h_P(u) - r| equals
    max(r_max - r, r - rho_min) with each term clamped at zero, where r_max is
    the farthest vertex norm and rho_min the smallest origin-to-edge-line
    distance. Raises OriginNotInteriorError otherwise (callers fall back to
    `hausdorff` against `polygonize` of the ball).
    """
    rho = origin_edge_distances(p)
    rho_min = float(rho.min())
    if rho_min <= 0.0:
        raise OriginNotInteriorError("origin is not strictly inside the polygon")
    r = ball.radius
    return max(max(origin_radius(p) - r, 0.0), max(r - rho_min, 0.0))


def chord_length(p: ConvexPolygon, line: Line) -> float:
    """Length of the intersection of an infinite line with the body (0 if disjoint)."""
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v
    p0 = np.asarray(line.point, dtype=float)
    d = line.direction.vector
    rel = p0[None, :] - v
    a = e[:, 0] * rel[:, 1] - e[:, 1] * rel[:, 0]  # cross(e, p0 - v)
    b = e[:, 0] * d[1] - e[:, 1] * d[0]  # cross(e, d)
    scale = _scale_of(v)
    lo, hi = -math.inf, math.inf
    tiny = 1e-15 * max(scale, 1.0)
    for ai, bi in zip(a, b):
        if bi > tiny:
            lo = max(lo, -ai / bi)
        elif bi < -tiny:
            hi = min(hi, -ai / bi)
        elif ai < -tiny:
            return 0.0
    return max(hi - lo, 0.0)


def contains(p: ConvexPolygon, q: ConvexPolygon, tol: float | None = None) -> bool:
    """True iff every vertex of Q is inside P or within tol of its boundary."""
    if tol is None:
        tol = 1e-9 * p.scale
    return bool(points_inside(p, q.vertices, tol).all())


def points_inside(p: ConvexPolygon, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Signed-distance membership test for an array of points against every edge."""
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v
    elen = np.hypot(e[:, 0], e[:, 1])
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    diff = pts[:, None, :] - v[None, :, :]
    cross = e[None, :, 0] * diff[:, :, 1] - e[None, :, 1] * diff[:, :, 0]
    signed = cross / elen[None, :]
    return (signed >= -tol).all(axis=1)


def reflect(p: ConvexPolygon, axis_angle: float) -> ConvexPolygon:
    """Mirror image across the line through the origin at the given angle."""
    c, s = math.cos(2.0 * axis_angle), math.sin(2.0 * axis_angle)
    m = np.array([[c, s], [s, -c]])
    return ConvexPolygon((p.vertices @ m.T)[::-1])


def translate(p: ConvexPolygon, offset) -> ConvexPolygon:
    return ConvexPolygon(p.vertices + np.asarray(offset, dtype=float))


def rescale_to_area(vertices: np.ndarray, target_area: float) -> np.ndarray:
    """Scale a vertex loop about the origin so the shoelace area matches exactly."""
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    a = 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))
    if a <= 0.0:
        raise InvalidPolygonError("cannot rescale a degenerate vertex loop")
    return v * math.sqrt(target_area / a)


def simplify(p: ConvexPolygon, max_vertices: int) -> ConvexPolygon:
    """Reduce to at most max_vertices by dropping the flattest corners.

    Repeatedly removes the vertex with the smallest turn cross product, then
    rescales about the origin to restore the area. Intended for cheap
    candidate evaluation, not for the bodies recorded in traces.
    """
    if max_vertices < 3:
        raise GeometryError("max_vertices must be at least 3")
    v = p.vertices
    if len(v) <= max_vertices:
        return p
    pts = list(map(tuple, v))
    while len(pts) > max_vertices:
        arr = np.array(pts)
        prv = np.roll(arr, 1, axis=0)
        nxt = np.roll(arr, -1, axis=0)
        e_in = arr - prv
        e_out = nxt - arr
        cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
        order = np.argsort(cross)
        # drop the flattest non-adjacent vertices in one sweep
        doomed = set()
        budget = len(pts) - max_vertices
        for idx in order:
            i = int(idx)
            if (i - 1) % len(pts) in doomed or (i + 1) % len(pts) in doomed:
                continue
            doomed.add(i)
            if len(doomed) >= budget:
                break
        pts = [pt for i, pt in enumerate(pts) if i not in doomed]
    out = rescale_to_area(normalized_vertices(pts), area(p))
    return ConvexPolygon(out)


def polygonize(shape, n: int = 0, width: float = 0.0) -> ConvexPolygon:
    """Bridge the analytic body types to the polygon engine.

    Balls and ellipses become inscribed n-gons (n >= 3); a segment becomes the
    rhombus with the segment as long diagonal and half-width `width`, i.e. the
    thin "cigar" of area length*width.
    """
    if isinstance(shape, CenteredBall):
        if n < 3:
            raise GeometryError(f"need at least 3 vertices, got {n}")
        t = TWO_PI * np.arange(n) / n
        return ConvexPolygon(shape.radius * np.stack([np.cos(t), np.sin(t)], axis=1))
    if isinstance(shape, CenteredEllipse):
        if n < 3:
            raise GeometryError(f"need at least 3 vertices, got {n}")
        from .symmetrize import ellipse_axes  # local import to avoid a cycle

        semi_major, semi_minor, phi = ellipse_axes(shape)
        t = TWO_PI * np.arange(n) / n
        xy = np.stack([semi_major * np.cos(t), semi_minor * np.sin(t)], axis=1)
        c, s = math.cos(phi), math.sin(phi)
        rot = np.array([[c, -s], [s, c]])
        return ConvexPolygon(xy @ rot.T)
    if isinstance(shape, CenteredSegment):
        if shape.length <= 0.0:
            raise GeometryError("cannot polygonize a zero-length segment")
        if width <= 0.0:
            raise GeometryError(f"rhombus half-width must be positive, got {width}")
        along = 0.5 * shape.length * shape.direction.vector
        across = width * np.array(
            [-math.sin(shape.direction.angle), math.cos(shape.direction.angle)]
        )
        return ConvexPolygon([along, across, -along, -across])
    raise GeometryError(f"cannot polygonize {type(shape).__name__}")


def cigar(segment: CenteredSegment, eps: float) -> ConvexPolygon:
    """Thin rhombus of area eps containing the segment as its long diagonal."""
    if eps <= 0.0:
        raise GeometryError(f"cigar area must be positive, got {eps}")
    if segment.length <= 0.0:
        raise GeometryError("cigar needs a segment of positive length")
    return polygonize(segment, width=eps / segment.length)


# ---------------------------------------------------------------------------
# Polygon file format: {"vertices": [[x, y], ...]} in CCW order.
# ---------------------------------------------------------------------------

def polygon_from_obj(obj) -> ConvexPolygon:
    if not isinstance(obj, dict):
        raise PolygonFormatError(f"top level: expected an object, got {type(obj).__name__}")
    if "vertices" not in obj:
        raise PolygonFormatError('top level: missing required key "vertices"')
    verts = obj["vertices"]
    if not isinstance(verts, list):
        raise PolygonFormatError('"vertices": expected a list of [x, y] pairs')
    for i, item in enumerate(verts):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in item)
        ):
            raise PolygonFormatError(f'"vertices[{i}]": expected an [x, y] number pair')
    # a well-formed file can still describe a bad polygon; keep the two failure
    # kinds separate so callers can report them distinctly
    return ConvexPolygon(verts)


def loads_polygon(text: str) -> ConvexPolygon:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolygonFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return polygon_from_obj(obj)


def load_polygon(path) -> ConvexPolygon:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads_polygon(text)
    except PolygonFormatError as exc:
        raise PolygonFormatError(f"{path}: {exc}") from exc
    except InvalidPolygonError as exc:
        raise InvalidPolygonError(f"{path}: {exc}") from exc


def dumps_polygon(p: ConvexPolygon) -> str:
    rows = ",\n    ".join(f"[{float(x)!r}, {float(y)!r}]" for x, y in p.vertices)
    return '{\n  "vertices": [\n    ' + rows + "\n  ]\n}\n"


def dump_polygon(p: ConvexPolygon, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_polygon(p))
