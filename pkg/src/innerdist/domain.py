"""Polygonal domains, their boundary graph and the comb family."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import DomainValidationError, InvalidInput
from .geom import (
    BOUNDARY,
    INSIDE,
    OUTSIDE,
    Point,
    Polyline,
    Segment,
    SimplePolygon,
    as_point,
    dist,
    in_open_segment,
    on_segment,
    orientation,
    polygon_contains,
    segments_intersect,
    simplicity_violation,
)

COMB_FIRST_INDEX = 2


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


@dataclass
class Ring:
    role: str  # "outer" or "hole"
    vertex_ids: list  # counterclockwise, T-junction points inserted


@dataclass
class BoundaryGraph:
    """Boundary pieces of a domain as a planar straight-line graph.

    Vertices are deduplicated in node order (outer, holes, slits, points).  Every
    segment is split at boundary vertices lying in its interior, so two segments
    meet only at shared endpoints.
    """

    vertices: list
    segments: list  # (i, j, kind)
    rings: list
    point_ids: list

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float).reshape(-1, 2)

    @cached_property
    def seg_array(self) -> np.ndarray:
        return np.array([(i, j) for i, j, _ in self.segments], dtype=int).reshape(-1, 2)

    @cached_property
    def seg_starts(self) -> np.ndarray:
        return self.coords[self.seg_array[:, 0]] if len(self.segments) else np.zeros((0, 2))

    @cached_property
    def seg_ends(self) -> np.ndarray:
        return self.coords[self.seg_array[:, 1]] if len(self.segments) else np.zeros((0, 2))

    @cached_property
    def neighbors(self) -> list:
        out = [[] for _ in self.vertices]
        for i, j, _ in self.segments:
            out[i].append(j)
            out[j].append(i)
        return out


@dataclass(frozen=True)
class PolygonalDomain:
    """Open planar set: inside ``outer`` (or the whole plane) minus the obstacles."""

    outer: Optional[SimplePolygon] = None
    holes: tuple = ()
    slits: tuple = ()
    points: tuple = ()

    def __post_init__(self):
        outer = self.outer
        if outer is not None and not isinstance(outer, SimplePolygon):
            outer = SimplePolygon(tuple(outer))
        holes = tuple(h if isinstance(h, SimplePolygon) else SimplePolygon(tuple(h)) for h in self.holes)
        slits = tuple(s if isinstance(s, Polyline) else Polyline(tuple(s)) for s in self.slits)
        points = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", holes)
        object.__setattr__(self, "slits", slits)
        object.__setattr__(self, "points", points)

    @property
    def bounded(self) -> bool:
        return self.outer is not None

    def all_vertices(self) -> list:
        out = list(self.outer.vertices) if self.outer else []
        for h in self.holes:
            out.extend(h.vertices)
        for s in self.slits:
            out.extend(s.vertices)
        out.extend(self.points)
        return out

    def extent(self) -> tuple[float, float, float, float]:
        pts = self.all_vertices()
        if not pts:
            return (0.0, 0.0, 0.0, 0.0)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return (min(xs), min(ys), max(xs), max(ys))

    @cached_property
    def boundary(self) -> BoundaryGraph:
        return _build_boundary(self)

    def validate(self, connectivity: bool = True) -> "PolygonalDomain":
        """Raise DomainValidationError on the first violated invariant."""
        _ = self.boundary
        if connectivity:
            from .geodesic import domain_is_connected

            if not domain_is_connected(self):
                raise DomainValidationError("the open set is not connected", "domain")
        return self

    def classify(self, p) -> str:
        """"inside" (in the open set), "boundary", or "outside" its closure."""
        p = as_point(p)
        g = self.boundary
        for i, j, _ in g.segments:
            if on_segment(p, g.vertices[i], g.vertices[j]):
                return BOUNDARY
        if p in self.points:
            return BOUNDARY
        if self.outer is not None and polygon_contains(self.outer, p) == OUTSIDE:
            return OUTSIDE
        for h in self.holes:
            if polygon_contains(h, p) == INSIDE:
                return OUTSIDE
        return INSIDE

    def in_closure(self, p) -> bool:
        return self.classify(p) != OUTSIDE

    def with_boundary_vertex(self, p) -> "PolygonalDomain":
        """Same domain with ``p`` (a point of an edge) promoted to a vertex."""
        p = as_point(p)
        if p in set(self.boundary.vertices):
            return self

        def insert(verts, closed):
            n = len(verts)
            m = n if closed else n - 1
            for k in range(m):
                a, b = verts[k], verts[(k + 1) % n]
                if in_open_segment(p, a, b):
                    return verts[: k + 1] + (p,) + verts[k + 1 :]
            return None

        if self.outer is not None:
            new = insert(self.outer.vertices, True)
            if new is not None:
                return PolygonalDomain(SimplePolygon(new), self.holes, self.slits, self.points)
        for i, h in enumerate(self.holes):
            new = insert(h.vertices, True)
            if new is not None:
                holes = self.holes[:i] + (SimplePolygon(new),) + self.holes[i + 1 :]
                return PolygonalDomain(self.outer, holes, self.slits, self.points)
        for i, s in enumerate(self.slits):
            new = insert(s.vertices, False)
            if new is not None:
                slits = self.slits[:i] + (Polyline(new),) + self.slits[i + 1 :]
                return PolygonalDomain(self.outer, self.holes, slits, self.points)
        raise InvalidInput(f"{p} is not on the boundary")


def _ring_violation(poly: SimplePolygon, path: str) -> None:
    why = simplicity_violation(poly.vertices)
    if why is not None:
        raise DomainValidationError(f"polygon is not simple ({why})", path)


def _build_boundary(dom: PolygonalDomain) -> BoundaryGraph:
    if dom.outer is not None:
        _ring_violation(dom.outer, "outer")
    for k, h in enumerate(dom.holes):
        _ring_violation(h, f"holes[{k}]")

    index: dict = {}
    vertices: list = []

    def vid(p) -> int:
        p = Point(*p)
        if p not in index:
            index[p] = len(vertices)
            vertices.append(p)
        return index[p]

    raw_rings = []
    if dom.outer is not None:
        raw_rings.append(("outer", "outer", [vid(v) for v in dom.outer.ccw().vertices]))
    for k, h in enumerate(dom.holes):
        raw_rings.append(("hole", f"holes[{k}]", [vid(v) for v in h.ccw().vertices]))
    raw_slits = [(f"slits[{k}]", [vid(v) for v in s.vertices]) for k, s in enumerate(dom.slits)]
    piece_vertex_count = len(vertices)
    point_ids = []
    for k, p in enumerate(dom.points):
        if p in index:
            raise DomainValidationError("point obstacle coincides with another boundary piece", f"points[{k}]")
        point_ids.append(vid(p))

    piece_verts = vertices[:piece_vertex_count]

    def refine(ids: list, closed: bool) -> list:
        # insert boundary vertices that lie inside an edge (T-junctions)
        out = []
        n = len(ids)
        m = n if closed else n - 1
        for k in range(m):
            i, j = ids[k], ids[(k + 1) % n]
            a, b = vertices[i], vertices[j]
            out.append(i)
            extra = [
                q for q in range(piece_vertex_count) if q not in (i, j) and in_open_segment(piece_verts[q], a, b)
            ]
            extra.sort(key=lambda q: dist(a, vertices[q]))
            out.extend(extra)
        if not closed:
            out.append(ids[-1])
        return out

    rings = []
    segments = []
    owners = []
    for role, path, ids in raw_rings:
        ids = refine(ids, True)
        rings.append(Ring(role, ids))
        for k in range(len(ids)):
            segments.append((ids[k], ids[(k + 1) % len(ids)], role))
            owners.append(path)
    for path, ids in raw_slits:
        ids = refine(ids, False)
        for k in range(len(ids) - 1):
            segments.append((ids[k], ids[k + 1], "slit"))
            owners.append(path)

    _check_segments(vertices, segments, owners)
    _check_nesting(dom, vertices, raw_rings, raw_slits, point_ids)
    return BoundaryGraph(vertices, segments, rings, point_ids)


def _check_segments(vertices, segments, owners) -> None:
    seen = {}
    for k, (i, j, _) in enumerate(segments):
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DomainValidationError(f"segment duplicated by {owners[seen[key]]}", owners[k])
        seen[key] = k
    coords = np.array(vertices, dtype=float)
    lo = np.minimum(coords[[s[0] for s in segments]], coords[[s[1] for s in segments]]) if segments else None
    hi = np.maximum(coords[[s[0] for s in segments]], coords[[s[1] for s in segments]]) if segments else None
    for k in range(len(segments)):
        i, j, kind_k = segments[k]
        a, b = vertices[i], vertices[j]
        overlap = np.flatnonzero(
            np.all(lo[k + 1 :] <= hi[k], axis=1) & np.all(hi[k + 1 :] >= lo[k], axis=1)
        ) + (k + 1)
        for m in overlap:
            p, q, kind_m = segments[m]
            c, d = vertices[p], vertices[q]
            if not segments_intersect(a, b, c, d):
                continue
            shared = {i, j} & {p, q}
            if not shared:
                raise DomainValidationError(f"boundary pieces cross ({owners[m]})", owners[k])
            (s,) = shared
            u = j if s == i else i
            v = q if s == p else p
            if orientation(vertices[s], vertices[u], vertices[v]) == 0:
                su = (vertices[u][0] - vertices[s][0], vertices[u][1] - vertices[s][1])
                sv = (vertices[v][0] - vertices[s][0], vertices[v][1] - vertices[s][1])
                if su[0] * sv[0] + su[1] * sv[1] > 0:
                    raise DomainValidationError(f"boundary pieces overlap ({owners[m]})", owners[k])
            if owners[k] != owners[m] and kind_k != "slit" and kind_m != "slit":
                raise DomainValidationError(f"polygons touch ({owners[m]})", owners[k])


def _check_nesting(dom, vertices, raw_rings, raw_slits, point_ids) -> None:
    holes = [(path, ids) for role, path, ids in raw_rings if role == "hole"]
    for path, ids in holes:
        if dom.outer is not None and polygon_contains(dom.outer, vertices[ids[0]]) != INSIDE:
            raise DomainValidationError("hole is not strictly inside the outer polygon", path)
        for other_path, other_ids in holes:
            if other_path != path:
                poly = [vertices[i] for i in other_ids]
                if polygon_contains(poly, vertices[ids[0]]) != OUTSIDE:
                    raise DomainValidationError(f"hole nested in {other_path}", path)
    for path, ids in raw_slits:
        for i in ids:
            p = vertices[i]
            if dom.outer is not None and polygon_contains(dom.outer, p) == OUTSIDE:
                raise DomainValidationError("slit leaves the outer polygon", path)
            for h in dom.holes:
                if polygon_contains(h, p) == INSIDE:
                    raise DomainValidationError("slit inside a hole", path)
        # a slit segment could still run through a hole or outside between vertices
        for i, j in zip(ids, ids[1:]):
            mid = ((vertices[i][0] + vertices[j][0]) / 2, (vertices[i][1] + vertices[j][1]) / 2)
            if dom.outer is not None and polygon_contains(dom.outer, mid) == OUTSIDE:
                raise DomainValidationError("slit leaves the outer polygon", path)
            for h in dom.holes:
                if polygon_contains(h, mid) == INSIDE:
                    raise DomainValidationError("slit inside a hole", path)
    for k, i in enumerate(point_ids):
        p = vertices[i]
        if dom.outer is not None and polygon_contains(dom.outer, p) != INSIDE:
            raise DomainValidationError("point obstacle not inside the outer polygon", f"points[{k}]")
        for h in dom.holes:
            if polygon_contains(h, p) != OUTSIDE:
                raise DomainValidationError("point obstacle inside or on a hole", f"points[{k}]")
        for path, ids in raw_slits:
            if any(on_segment(p, vertices[a], vertices[b]) for a, b in zip(ids, ids[1:])):
                raise DomainValidationError("point obstacle lies on a slit", f"points[{k}]")


@dataclass(frozen=True)
class BoundaryComponent:
    segments: tuple = ()
    point: Optional[Point] = None
    h1: float = 0.0


@dataclass(frozen=True)
class BoundaryDecomposition:
    components: tuple
    h1_E: float
    h1_total: float

    @property
    def positive(self) -> list:
        return [c for c in self.components if c.h1 > 0]

    @property
    def point_components(self) -> list:
        return [c for c in self.components if c.point is not None]


def decompose_boundary(dom: PolygonalDomain) -> BoundaryDecomposition:
    """Connected components of the boundary and their lengths."""
    dom.validate()
    g = dom.boundary
    uf = UnionFind(len(g.vertices))
    for i, j, _ in g.segments:
        uf.union(i, j)
    groups: dict = {}
    for i, j, _ in g.segments:
        groups.setdefault(uf.find(i), []).append(Segment(g.vertices[i], g.vertices[j]))
    comps = [
        BoundaryComponent(tuple(segs), None, math.fsum(s.length for s in segs))
        for _, segs in sorted(groups.items())
    ]
    comps += [BoundaryComponent((), g.vertices[i], 0.0) for i in g.point_ids]
    h1_E = math.fsum(c.h1 for c in comps if c.h1 > 0)
    h1_total = math.fsum(dist(g.vertices[i], g.vertices[j]) for i, j, _ in g.segments)
    return BoundaryDecomposition(tuple(comps), h1_E, h1_total)


def comb_slit_specs(n: int, first: int = 1) -> list[tuple[int, float, float, float, bool]]:
    """Slits (i, x, y0, y1, degenerate) of the comb for i = first..n."""
    out = []
    for i in range(first, n + 1):
        out.append((i, 1 / (2 * i), 0.0, 1 - 1 / i, 1 - 1 / i == 0.0))
        out.append((i, 1 / (2 * i + 1), 1 / i, 1.0, 1 / i == 1.0))
    return out


def comb_domain(n: int) -> PolygonalDomain:
    """Unit square with alternating bottom/top slits at x = 1/(2i) and 1/(2i+1).

    Index i = 1 gives zero-length slits and is skipped.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInput(f"comb needs an integer n >= 2, got {n!r}")
    slits = [
        Polyline(((x, y0), (x, y1)))
        for _, x, y0, y1, degenerate in comb_slit_specs(n, first=1)
        if not degenerate
    ]
    square = SimplePolygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))
    return PolygonalDomain(square, (), tuple(slits), ())


def comb_dropped_slits(n: int) -> int:
    return sum(1 for spec in comb_slit_specs(n, first=1) if spec[-1])


def comb_boundary_length(n: int) -> float:
    return 4 + 2 * math.fsum(1 - 1 / i for i in range(COMB_FIRST_INDEX, n + 1))


def connected_diam_vs_length(segments: Sequence) -> tuple[float, float]:
    """(diameter, total length) of a connected segment graph."""
    segs = [s if isinstance(s, Segment) else Segment(*s) for s in segments]
    if not segs:
        raise InvalidInput("empty segment set")
    index: dict = {}
    for s in segs:
        for p in (s.a, s.b):
            index.setdefault(p, len(index))
    uf = UnionFind(len(index))
    for s in segs:
        uf.union(index[s.a], index[s.b])
    if len({uf.find(i) for i in range(len(index))}) != 1:
        raise InvalidInput("segment set is not connected")
    pts = np.array(list(index), dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    diam = float(np.sqrt((diff**2).sum(-1)).max())
    return diam, math.fsum(s.length for s in segs)
