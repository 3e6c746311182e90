"""Convex covers of connected segment sets with a certified boundary length.

A connected set K is cut into pieces that each fit in a ball of radius r, each
piece is replaced by its convex hull inflated by a small delta, and the total
perimeter of the pieces is certified against 2 * length(K) + epsilon.  Convex
polygons stand in for the smooth Jordan curves of the classical definition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .domain import UnionFind
from .errors import InfeasibleTolerance, InvalidInput
from .geom import (
    OUTSIDE,
    ConvexHull,
    Point,
    Segment,
    as_point,
    convex_hull,
    dist,
    hull_boundary_h1,
    point_segments_distance,
    polygon_contains,
)

ARC_RESOLUTION = 256
SAMPLES_PER_SEGMENT = 16
_TINY = 1e-15


@dataclass(frozen=True)
class ConnectedSet:
    segments: tuple

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        if not segs:
            raise InvalidInput("a connected set needs at least one segment")
        object.__setattr__(self, "segments", segs)
        index: dict = {}
        for s in segs:
            index.setdefault(s.a, len(index))
            index.setdefault(s.b, len(index))
        uf = UnionFind(len(index))
        for s in segs:
            uf.union(index[s.a], index[s.b])
        if len({uf.find(i) for i in range(len(index))}) != 1:
            raise InvalidInput("segments do not form a connected graph")

    @property
    def h1(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @property
    def vertices(self) -> list:
        seen = {}
        for s in self.segments:
            seen.setdefault(s.a, None)
            seen.setdefault(s.b, None)
        return list(seen)

    def samples(self, per_segment: int = SAMPLES_PER_SEGMENT) -> np.ndarray:
        t = (np.arange(per_segment) + 0.5) / per_segment
        out = [np.array(self.vertices, dtype=float)]
        for s in self.segments:
            a, b = np.array(s.a), np.array(s.b)
            out.append(a + t[:, None] * (b - a))
        return np.vstack(out)


def _clip_to_ball(a, b, c, r) -> tuple[float, float] | None:
    """Parameter interval of segment ab inside the closed ball B(c, r)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    fx, fy = a[0] - c[0], a[1] - c[1]
    A = dx * dx + dy * dy
    B = fx * dx + fy * dy
    C = fx * fx + fy * fy - r * r
    disc = B * B - A * C
    if disc < 0:
        return None
    root = math.sqrt(disc)
    t0 = 0.0 if dist(a, c) <= r else max(0.0, (-B - root) / A)
    t1 = 1.0 if dist(b, c) <= r else min(1.0, (-B + root) / A)
    if t0 > t1:
        return None
    return t0, t1


def split_connected_set(K: ConnectedSet, r: float) -> list[ConnectedSet]:
    """Cut K into connected pieces, each inside a closed ball of radius r at its seed.

    Seeds are the lexicographically smallest vertex of what is left; a piece is
    the part of the remainder inside the seed ball that is connected to the seed.
    """
    if not r > 0:
        raise InvalidInput(f"radius must be positive, got {r}")
    remaining = [(s.a, s.b) for s in K.segments]
    pieces = []
    while remaining:
        seed = min(p for seg in remaining for p in seg)
        taken, rest = [], []
        frontier = [seed]
        reached = {seed}
        pool = list(remaining)
        while frontier:
            v = frontier.pop()
            keep = []
            for a, b in pool:
                if v not in (a, b):
                    keep.append((a, b))
                    continue
                if v == b:
                    a, b = b, a
                if dist(b, seed) <= r:
                    taken.append((a, b))
                    if b not in reached:
                        reached.add(b)
                        frontier.append(b)
                    continue
                span = _clip_to_ball(a, b, seed, r)
                t1 = span[1] if span is not None else 0.0
                cut = Point(a[0] + t1 * (b[0] - a[0]), a[1] + t1 * (b[1] - a[1]))
                if dist(cut, b) <= _TINY:
                    taken.append((a, b))
                    continue
                if dist(a, cut) > 0:
                    taken.append((a, cut))
                    rest.append((cut, b))
                else:
                    rest.append((a, b))
            pool = keep
        remaining = pool + rest
        pieces.append(ConnectedSet(tuple(Segment(a, b) for a, b in taken)))
    return pieces


def inflate(hull: ConvexHull, delta: float, resolution: int = ARC_RESOLUTION) -> ConvexHull:
    """Offset of a convex hull by delta, corner arcs replaced by inscribed chords.

    The perimeter never exceeds the exact offset perimeter, hull + 2*pi*delta.
    """
    verts = list(hull.vertices)
    if hull.kind == "point":
        c = verts[0]
        phis = 2 * math.pi * np.arange(resolution) / resolution
        return ConvexHull("polygon", tuple(Point(c[0] + delta * math.cos(p), c[1] + delta * math.sin(p)) for p in phis))
    n = len(verts)
    normals = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        L = dist(a, b)
        normals.append(((b[1] - a[1]) / L, -(b[0] - a[0]) / L))
    out = []
    for i in range(n):
        v = verts[i]
        n_in, n_out = normals[i - 1], normals[i]
        a0 = math.atan2(n_in[1], n_in[0])
        turn = (math.atan2(n_out[1], n_out[0]) - a0) % (2 * math.pi)
        k = max(1, math.ceil(resolution * turn / (2 * math.pi)))
        for j in range(k + 1):
            phi = a0 + turn * j / k
            out.append(Point(v[0] + delta * math.cos(phi), v[1] + delta * math.sin(phi)))
    return ConvexHull("polygon", tuple(out))


@dataclass(frozen=True)
class CoverCertificate:
    pieces: tuple
    sum_boundary: float
    h1: float
    epsilon: float
    clearance: float
    contains_K: bool
    inside_U: bool
    boundary_curves: str = "convex polygons"
    notes: tuple = field(default=())

    @property
    def bound(self) -> float:
        return 2 * self.h1 + self.epsilon

    @property
    def satisfied(self) -> bool:
        return self.contains_K and self.inside_U and self.sum_boundary <= self.bound


def _covered(samples: np.ndarray, pieces) -> bool:
    """Every sample lies in (or on) at least one convex ccw piece."""
    hit = np.zeros(len(samples), dtype=bool)
    for piece in pieces:
        v = np.array(piece.vertices, dtype=float)
        e = np.roll(v, -1, axis=0) - v
        rel = samples[:, None, :] - v[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        hit |= (cross >= 0).all(axis=1)
        if hit.all():
            return True
    return bool(hit.all())


def painleve_cover(K: ConnectedSet, clearance: float, epsilon: float, retries: int = 8) -> CoverCertificate:
    """Inflated convex hulls of pieces of K, total perimeter <= 2 length(K) + epsilon."""
    if not (clearance > 0 and epsilon > 0):
        raise InvalidInput("clearance and epsilon must be positive")
    if retries < 0:
        raise InvalidInput("retries must be non-negative")
    r = clearance / 2
    parts = split_connected_set(K, r)
    hulls = [convex_hull(p.vertices) for p in parts]
    delta = min(epsilon / (4 * math.pi * len(parts)), clearance / 4)
    h1 = K.h1
    samples = K.samples()
    starts = np.array([s.a for s in K.segments], dtype=float)
    ends = np.array([s.b for s in K.segments], dtype=float)
    cert = None
    for _ in range(retries + 1):
        pieces = tuple(inflate(h, delta) for h in hulls)
        total = math.fsum(hull_boundary_h1(p) for p in pieces)
        verts = np.array([v for p in pieces for v in p.vertices], dtype=float)
        inside_U = bool((point_segments_distance(verts, starts, ends) < clearance).all())
        cert = CoverCertificate(pieces, total, h1, epsilon, clearance, _covered(samples, pieces), inside_U)
        if cert.satisfied:
            return cert
        delta /= 2
    raise InfeasibleTolerance(f"cover exceeds 2H1+eps: {cert.sum_boundary} > {cert.bound}", cert)


def hull_double_length_check(K: ConnectedSet) -> tuple[float, float]:
    """(hull boundary length, hull length / length of K)."""
    h = hull_boundary_h1(convex_hull(K.vertices))
    return h, h / K.h1


def _disk(c, radius: float) -> ConvexHull:
    return inflate(ConvexHull("point", (c,)), radius)


def _component_distance(a, b) -> float:
    def pts_segs(obj):
        if isinstance(obj, ConnectedSet):
            return (
                obj.samples(1),
                np.array([s.a for s in obj.segments], dtype=float),
                np.array([s.b for s in obj.segments], dtype=float),
            )
        p = np.array([obj], dtype=float)
        return p, p, p

    pa, sa, ea = pts_segs(a)
    pb, sb, eb = pts_segs(b)
    # segment-to-segment distance is attained at an endpoint of one of them
    return float(
        min(
            point_segments_distance(np.vstack([sa, ea]), sb, eb).min(),
            point_segments_distance(np.vstack([sb, eb]), sa, ea).min(),
        )
    )


def pi_bound_check(components: Sequence, epsilon: float, clearance: float | None = None) -> CoverCertificate:
    """Cover a finite union of connected sets and points within 2 H1 + epsilon.

    Each of the m components gets epsilon/m; points get inscribed disks.
    """
    if not epsilon > 0:
        raise InvalidInput("epsilon must be positive")
    comps = [c if isinstance(c, ConnectedSet) else as_point(c) for c in components]
    if not comps:
        raise InvalidInput("no components")
    m = len(comps)
    if clearance is None:
        gaps = [_component_distance(comps[i], comps[j]) for i in range(m) for j in range(i + 1, m)]
        clearance = min([1.0] + [g / 2 for g in gaps])
        if clearance <= 0:
            raise InvalidInput("components are not disjoint")
    eps_each = epsilon / m
    pieces, h1, contains, inside = [], 0.0, True, True
    for c in comps:
        if isinstance(c, ConnectedSet):
            cert = painleve_cover(c, clearance, eps_each)
            pieces.extend(cert.pieces)
            h1 += cert.h1
            contains &= cert.contains_K
            inside &= cert.inside_U
        else:
            radius = min(eps_each / (2 * math.pi), clearance / 2)
            disk = _disk(c, radius)
            pieces.append(disk)
            contains &= polygon_contains(disk.vertices, c) != OUTSIDE
    total = math.fsum(hull_boundary_h1(p) for p in pieces)
    cert = CoverCertificate(tuple(pieces), total, h1, epsilon, clearance, contains, inside)
    if not cert.satisfied:
        raise InfeasibleTolerance(f"cover exceeds 2H1+eps: {total} > {cert.bound}", cert)
    return cert
