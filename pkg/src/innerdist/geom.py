"""Planar primitives with exact orientation signs.

Coordinates are doubles.  Signs of orientation determinants are computed with a
floating-point filter and fall back to rational arithmetic when the estimate is
inside its error bound, so every sign below is exact for the stored doubles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInput

# Shewchuk's ccwerrboundA for the 2x2 orientation determinant
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    try:
        x, y = float(p[0]), float(p[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"not a point: {p!r}") from exc
    if len(p) != 2:
        raise InvalidInput(f"not a point: {p!r}")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInput(f"non-finite coordinate in {p!r}")
    return Point(x, y)


def dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def _exact_orientation(p, q, r) -> int:
    try:
        px, py = Fraction(p[0]), Fraction(p[1])
        det = (Fraction(q[0]) - px) * (Fraction(r[1]) - py) - (Fraction(q[1]) - py) * (
            Fraction(r[0]) - px
        )
    except (ValueError, OverflowError, TypeError) as exc:
        raise InvalidInput(f"non-finite input to orientation: {p}, {q}, {r}") from exc
    return (det > 0) - (det < 0)


def orientation(p, q, r) -> int:
    """Sign of the signed area of triangle (p, q, r): +1 ccw, -1 cw, 0 collinear."""
    left = (q[0] - p[0]) * (r[1] - p[1])
    right = (q[1] - p[1]) * (r[0] - p[0])
    det = left - right
    bound = _CCW_ERRBOUND * (abs(left) + abs(right))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return _exact_orientation(p, q, r)


def orientation_many(p, q, rs: np.ndarray) -> np.ndarray:
    """Vectorized ``orientation(p, q, r)`` over the rows of ``rs`` (shape (n, 2))."""
    rs = np.asarray(rs, dtype=float)
    left = (q[0] - p[0]) * (rs[:, 1] - p[1])
    right = (q[1] - p[1]) * (rs[:, 0] - p[0])
    det = left - right
    bound = _CCW_ERRBOUND * (np.abs(left) + np.abs(right))
    out = np.where(det > bound, 1, np.where(-det > bound, -1, 0)).astype(np.int8)
    for i in np.flatnonzero(~(np.abs(det) > bound)):
        out[i] = _exact_orientation(p, q, rs[i])
    return out


def orientation_pairs(ps: np.ndarray, qs: np.ndarray, r) -> np.ndarray:
    """Vectorized ``orientation(ps[i], qs[i], r)``."""
    left = (qs[:, 0] - ps[:, 0]) * (r[1] - ps[:, 1])
    right = (qs[:, 1] - ps[:, 1]) * (r[0] - ps[:, 0])
    det = left - right
    bound = _CCW_ERRBOUND * (np.abs(left) + np.abs(right))
    out = np.where(det > bound, 1, np.where(-det > bound, -1, 0)).astype(np.int8)
    for i in np.flatnonzero(~(np.abs(det) > bound)):
        out[i] = _exact_orientation(ps[i], qs[i], r)
    return out


def on_segment(p, a, b) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if orientation(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def in_open_segment(p, a, b) -> bool:
    return on_segment(p, a, b) and tuple(p) != tuple(a) and tuple(p) != tuple(b)


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments [a, b] and [c, d] share at least one point."""
    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if self.a == self.b:
            raise InvalidInput(f"zero-length segment at {self.a}")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


def proper_cross(s: Segment, t: Segment) -> bool:
    """Open segments meet in exactly one point interior to both."""
    return _proper_cross(s.a, s.b, t.a, t.b)


def _proper_cross(a, b, c, d) -> bool:
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    if o1 == 0 or o2 == 0 or o1 == o2:
        return False
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return o3 != 0 and o4 != 0 and o3 != o4


def proper_cross_many(a, b, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Boolean mask: open segment (a, b) properly crosses (starts[i], ends[i])."""
    if len(starts) == 0:
        return np.zeros(0, dtype=bool)
    o1 = orientation_many(a, b, starts)
    o2 = orientation_many(a, b, ends)
    cand = (o1 * o2) < 0
    out = np.zeros(len(starts), dtype=bool)
    idx = np.flatnonzero(cand)
    if len(idx):
        o3 = orientation_pairs(starts[idx], ends[idx], a)
        o4 = orientation_pairs(starts[idx], ends[idx], b)
        out[idx] = (o3 * o4) < 0
    return out


@dataclass(frozen=True)
class Polyline:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        if len(verts) < 2:
            raise InvalidInput("a polyline needs at least two vertices")
        for u, v in zip(verts, verts[1:]):
            if u == v:
                raise InvalidInput(f"repeated consecutive vertex {u}")
        object.__setattr__(self, "vertices", verts)

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))

    @property
    def length(self) -> float:
        return polyline_length(self.vertices)


def polyline_length(vertices: Sequence) -> float:
    return math.fsum(dist(u, v) for u, v in zip(vertices, vertices[1:]))


def signed_area(vertices: Sequence) -> float:
    n = len(vertices)
    return 0.5 * math.fsum(
        vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1]
        for i in range(n)
    )


def perimeter(vertices: Sequence) -> float:
    n = len(vertices)
    return math.fsum(dist(vertices[i], vertices[(i + 1) % n]) for i in range(n))


@dataclass(frozen=True)
class SimplePolygon:
    """Closed simple polygon; the closing edge is implicit."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        if len(verts) >= 2 and verts[0] == verts[-1]:
            verts = verts[:-1]
        if len(verts) < 3:
            raise InvalidInput("a polygon needs at least three vertices")
        object.__setattr__(self, "vertices", verts)

    @property
    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    @property
    def perimeter(self) -> float:
        return perimeter(self.vertices)

    def ccw(self) -> "SimplePolygon":
        return self if self.area > 0 else SimplePolygon(self.vertices[::-1])


def simplicity_violation(vertices: Sequence) -> str | None:
    """Reason the closed vertex ring is not a simple polygon, or None."""
    n = len(vertices)
    if n < 3:
        return "fewer than three vertices"
    if len(set(map(tuple, vertices))) != n:
        return "repeated vertex"
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share one vertex; they must not fold back
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                if orientation(other_i, shared, other_j) == 0:
                    dx1, dy1 = other_i[0] - shared[0], other_i[1] - shared[1]
                    dx2, dy2 = other_j[0] - shared[0], other_j[1] - shared[1]
                    if dx1 * dx2 + dy1 * dy2 > 0:
                        return f"edges {i} and {j} overlap"
                continue
            if segments_intersect(a, b, c, d):
                return f"edges {i} and {j} intersect"
    if signed_area(vertices) == 0.0:
        return "zero area"
    return None


INSIDE, BOUNDARY, OUTSIDE = "inside", "boundary", "outside"


def polygon_contains(poly, p) -> str:
    """Classify p against a simple polygon: "inside", "boundary" or "outside"."""
    verts = poly.vertices if isinstance(poly, SimplePolygon) else poly
    p = as_point(p)
    n = len(verts)
    crossings = 0
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if on_segment(p, a, b):
            return BOUNDARY
        # half-open rule on y; sign decided by exact orientation
        if (a[1] > p[1]) != (b[1] > p[1]):
            o = orientation(a, b, p)
            if (o > 0) == (b[1] > a[1]):
                crossings += 1
    return INSIDE if crossings % 2 else OUTSIDE


def polygon_contains_many(verts: Sequence, pts: np.ndarray) -> np.ndarray:
    """Floating-point even-odd test for many points; boundary points are unspecified."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        straddle = (ay > y) != (by > y)
        if not straddle.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (y - ay) * (bx - ax) / (by - ay)
        inside ^= straddle & (x < xint)
    return inside


@dataclass(frozen=True)
class ConvexHull:
    kind: str  # "polygon" | "segment" | "point"
    vertices: tuple

    @property
    def boundary_vertices(self) -> tuple:
        return self.vertices


def convex_hull(points: Iterable) -> ConvexHull:
    """Andrew's monotone chain; collinear points are dropped, output is ccw."""
    pts = sorted(set(as_point(p) for p in points))
    if not pts:
        raise InvalidInput("convex hull of an empty set")
    if len(pts) == 1:
        return ConvexHull("point", (pts[0],))

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return ConvexHull("segment", (pts[0], pts[-1]))
    return ConvexHull("polygon", tuple(hull))


def hull_boundary_h1(hull: ConvexHull) -> float:
    """Length of the hull boundary; a segment hull is its own boundary."""
    if hull.kind == "point":
        return 0.0
    if hull.kind == "segment":
        return dist(*hull.vertices)
    return perimeter(hull.vertices)


def point_segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    den = dx * dx + dy * dy
    t = 0.0 if den == 0 else ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / den
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def point_segments_distance(pts: np.ndarray, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest of the given segments."""
    pts = np.asarray(pts, dtype=float)
    best = np.full(len(pts), np.inf)
    for a, b in zip(starts, ends):
        d = b - a
        den = float(d @ d)
        rel = pts - a
        t = np.zeros(len(pts)) if den == 0 else np.clip(rel @ d / den, 0.0, 1.0)
        proj = rel - t[:, None] * d
        best = np.minimum(best, np.hypot(proj[:, 0], proj[:, 1]))
    return best
