"""Inner distance by shortest paths in a sector-aware visibility graph.

Each boundary vertex is split into one graph node per free angular sector
around it (the gaps between incident boundary segments that face the open
set).  A path that enters a vertex in one sector must leave in the same
sector, which keeps geodesics from slipping through slit bends or junctions.
Straight runs along a boundary segment carry a side (left/right of the
direction of travel) that must be the same at every vertex the run touches.
"""
from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .domain import PolygonalDomain, UnionFind
from .errors import InvalidInput, Unreachable
from .geom import (
    BOUNDARY,
    INSIDE,
    OUTSIDE,
    Point,
    as_point,
    dist,
    in_open_segment,
    orientation,
    orientation_many,
    polygon_contains,
    polyline_length,
    proper_cross_many,
)

LEFT, RIGHT = "L", "R"
_TWO_PI = 2.0 * math.pi


def _angle(w, p) -> float:
    return math.atan2(p[1] - w[1], p[0] - w[0])


def _in_ccw_sweep(start: float, end: float, ang: float) -> bool:
    """ang strictly inside the ccw sweep from start to end (start == end: full turn)."""
    span = (end - start) % _TWO_PI or _TWO_PI
    off = (ang - start) % _TWO_PI
    return 0.0 < off < span


@dataclass
class VertexStar:
    """Boundary rays around one vertex, sorted by angle, and their sectors.

    Sector ``s`` is the open wedge swept counterclockwise from ray ``s`` to ray
    ``s + 1``; a vertex without rays (a point obstacle) has one sector.
    """

    point: Point
    angles: list
    nbrs: list
    free: list
    node: list  # graph node id per sector, None for blocked sectors

    def sector_at(self, ang: float) -> int:
        if not self.angles:
            return 0
        return (bisect.bisect_right(self.angles, ang) - 1) % len(self.angles)

    def ray_toward(self, target, vertices) -> Optional[int]:
        """Index of the ray pointing exactly at ``target``'s direction, if any."""
        w = self.point
        for r, nb in enumerate(self.nbrs):
            q = vertices[nb]
            if orientation(w, q, target) == 0:
                if (q[0] - w[0]) * (target[0] - w[0]) + (q[1] - w[1]) * (target[1] - w[1]) > 0:
                    return r
        return None

    def sectors_toward(self, target, vertices) -> list:
        """(sector, side) pairs usable when leaving this vertex toward ``target``.

        Side is the side of travel the path keeps when it leaves along a
        boundary ray; ``None`` when it leaves into the open wedge.
        """
        r = self.ray_toward(target, vertices)
        if r is None:
            s = self.sector_at(_angle(self.point, target))
            return [(s, None)] if self.free[s] else []
        k = len(self.angles)
        out = []
        if self.free[r]:
            out.append((r, LEFT))
        if self.free[(r - 1) % k]:
            out.append(((r - 1) % k, RIGHT))
        return out


@dataclass(frozen=True)
class VisibilityGraph:
    nodes: tuple  # Point per node
    edges: tuple  # (i, j, weight)
    node_vertex: tuple  # boundary vertex id per node, None for query points
    node_sector: tuple


@dataclass(frozen=True)
class GeodesicPath:
    vertices: tuple
    length: float

    def as_dict(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "length": self.length}


class GeodesicEngine:
    """Static visibility structure of one domain; answers distance queries."""

    def __init__(self, domain: PolygonalDomain):
        self.domain = domain
        g = domain.boundary
        self.g = g
        self.vertices = g.vertices
        self.coords = g.coords
        self.seg_starts = g.seg_starts
        self.seg_ends = g.seg_ends
        self.seg_lo = np.minimum(self.seg_starts, self.seg_ends)
        self.seg_hi = np.maximum(self.seg_starts, self.seg_ends)
        self.seg_set = {(min(i, j), max(i, j)) for i, j, _ in g.segments}
        self.stars = self._build_stars()
        self.node_vertex: list = []
        self.node_sector: list = []
        for v, star in enumerate(self.stars):
            for s, free in enumerate(star.free):
                if free:
                    star.node[s] = len(self.node_vertex)
                    self.node_vertex.append(v)
                    self.node_sector.append(s)
        self.n_static = len(self.node_vertex)
        self.adj: list = [[] for _ in range(self.n_static)]
        self.static_edges: list = []
        n = len(self.vertices)
        for u in range(n):
            for v in range(u + 1, n):
                for su, sv in self.edge_options(self.vertices[u], self.vertices[v], u, v):
                    a, b = self.stars[u].node[su], self.stars[v].node[sv]
                    w = dist(self.vertices[u], self.vertices[v])
                    self.static_edges.append((a, b, w))
                    self.adj[a].append((b, w))
                    self.adj[b].append((a, w))

    def _build_stars(self) -> list:
        verts = self.vertices
        stars = []
        cones = [[] for _ in verts]  # (role, start angle, end angle) of ring interiors
        for ring in self.g.rings:
            ids = ring.vertex_ids
            m = len(ids)
            for k, v in enumerate(ids):
                prev, nxt = ids[k - 1], ids[(k + 1) % m]
                cones[v].append(
                    (ring.role, _angle(verts[v], verts[nxt]), _angle(verts[v], verts[prev]))
                )
        for v, p in enumerate(verts):
            rays = sorted((_angle(p, verts[nb]), nb) for nb in self.g.neighbors[v])
            angles = [a for a, _ in rays]
            nbrs = [nb for _, nb in rays]
            k = len(rays)
            free = []
            for s in range(max(k, 1)):
                if k == 0:
                    mid = 0.0
                else:
                    gap = (angles[(s + 1) % k] - angles[s]) % _TWO_PI or _TWO_PI
                    mid = angles[s] + gap / 2
                ok = True
                for role, start, end in cones[v]:
                    inside = _in_ccw_sweep(start, end, mid)
                    if inside != (role == "outer"):
                        ok = False
                free.append(ok)
            stars.append(VertexStar(p, angles, nbrs, free, [None] * max(k, 1)))
        return stars

    # -- edge admissibility -------------------------------------------------

    def _touched(self, P, Q, exclude=()) -> list:
        lo = np.minimum(P, Q)
        hi = np.maximum(P, Q)
        c = self.coords
        box = np.flatnonzero(np.all(c >= lo, axis=1) & np.all(c <= hi, axis=1))
        box = [i for i in box if i not in exclude]
        if not box:
            return []
        o = orientation_many(P, Q, c[box])
        hits = [box[k] for k in np.flatnonzero(o == 0)]
        dx, dy = Q[0] - P[0], Q[1] - P[1]
        hits.sort(key=lambda i: (c[i, 0] - P[0]) * dx + (c[i, 1] - P[1]) * dy)
        return hits

    def _crosses(self, P, Q) -> bool:
        if len(self.seg_starts) == 0:
            return False
        lo = np.minimum(P, Q)
        hi = np.maximum(P, Q)
        cand = np.flatnonzero(np.all(self.seg_lo <= hi, axis=1) & np.all(self.seg_hi >= lo, axis=1))
        if len(cand) == 0:
            return False
        return bool(proper_cross_many(P, Q, self.seg_starts[cand], self.seg_ends[cand]).any())

    def _open_point_ok(self, p) -> bool:
        dom = self.domain
        if dom.outer is not None and polygon_contains(dom.outer, p) == OUTSIDE:
            return False
        return all(polygon_contains(h, p) != INSIDE for h in dom.holes)

    def _pass_sides(self, w: int, P, Q) -> set:
        """Sides on which a straight path P->Q may pass through boundary vertex w."""
        star = self.stars[w]
        if not star.angles:
            return {LEFT, RIGHT}
        signs = [orientation(P, Q, self.vertices[nb]) for nb in star.nbrs]
        theta = _angle(P, Q)
        out = set()
        if not any(s > 0 for s in signs) and star.free[star.sector_at(_wrap(theta + math.pi / 2))]:
            out.add(LEFT)
        if not any(s < 0 for s in signs) and star.free[star.sector_at(_wrap(theta - math.pi / 2))]:
            out.add(RIGHT)
        return out

    def edge_options(self, P, Q, pid: Optional[int], qid: Optional[int]) -> list:
        """Admissible (sector at P, sector at Q) pairs for the segment P-Q.

        ``pid``/``qid`` are boundary vertex ids of the endpoints, or None for
        free query points (whose sector is reported as None).
        """
        P = (float(P[0]), float(P[1]))
        Q = (float(Q[0]), float(Q[1]))
        if P == Q or self._crosses(P, Q):
            return []
        exclude = {i for i in (pid, qid) if i is not None}
        inner = self._touched(P, Q, exclude)
        stops = ([pid] if pid is not None else [None]) + inner + ([qid] if qid is not None else [None])
        pts = [P] + [self.vertices[i] for i in inner] + [Q]
        # chains of stops joined by runs along boundary segments
        chains = [[0]]
        for k in range(len(stops) - 1):
            a, b = stops[k], stops[k + 1]
            if a is not None and b is not None and (min(a, b), max(a, b)) in self.seg_set:
                chains[-1].append(k + 1)
                continue
            mid = ((pts[k][0] + pts[k + 1][0]) / 2, (pts[k][1] + pts[k + 1][1]) / 2)
            if not self._open_point_ok(mid):
                return []
            chains.append([k + 1])

        last = len(stops) - 1
        start_opts = [(None, None)] if pid is None else self.stars[pid].sectors_toward(Q, self.vertices)
        end_opts = [(None, None)] if qid is None else self.stars[qid].sectors_toward(P, self.vertices)
        # arriving at Q: leaving Q on its left means travelling P->Q on the right
        end_opts = [(s, {LEFT: RIGHT, RIGHT: LEFT}.get(side)) for s, side in end_opts]

        for chain in chains:
            members = [k for k in chain if 0 < k < last]
            if not members:
                continue
            sides = {LEFT, RIGHT}
            for k in members:
                sides &= self._pass_sides(stops[k], P, Q)
            if not sides:
                return []
            if chain[0] == 0 or chain[-1] == last:
                start_opts = _restrict(start_opts, sides) if chain[0] == 0 else start_opts
                end_opts = _restrict(end_opts, sides) if chain[-1] == last else end_opts

        one_chain = len(chains) == 1
        out = []
        for sp, side_p in start_opts:
            for sq, side_q in end_opts:
                if one_chain and side_p is not None and side_q is not None and side_p != side_q:
                    continue
                out.append((sp, sq))
        return out

    # -- queries ------------------------------------------------------------

    def _query_links(self, p, vid: Optional[int]) -> list:
        """Edges (node, weight) from a query point to static nodes."""
        if vid is not None:
            star = self.stars[vid]
            return [(nd, 0.0) for nd in star.node if nd is not None]
        out = []
        for v, q in enumerate(self.vertices):
            for _, sq in self.edge_options(p, q, None, v):
                out.append((self.stars[v].node[sq], dist(p, q)))
        return out

    def locate(self, p, allow_vertex: bool = True) -> Optional[int]:
        """Vertex id if p is a boundary vertex; None if p is in the open set."""
        p = as_point(p)
        where = self.domain.classify(p)
        if where == INSIDE:
            return None
        if where == BOUNDARY and allow_vertex:
            vid = self.g.vertices.index(p) if p in self.g.vertices else None
            if vid is not None:
                return vid
            raise InvalidInput(f"{p} lies on the boundary but is not a boundary vertex")
        raise InvalidInput(f"{p} is not in the domain")

    def graph_with(self, extra: Sequence) -> tuple:
        """Adjacency of the static graph extended by query nodes (appended last)."""
        extra = [as_point(p) for p in extra]
        vids = [self.locate(p) for p in extra]
        base = self.n_static
        adj = {}
        for k, (p, vid) in enumerate(zip(extra, vids)):
            links = self._query_links(p, vid)
            adj[base + k] = list(links)
            for nd, w in links:
                adj.setdefault(nd, []).append((base + k, w))
        for a in range(len(extra)):
            for b in range(a + 1, len(extra)):
                if vids[a] is None and vids[b] is None:
                    if extra[a] == extra[b] or self.edge_options(extra[a], extra[b], None, None):
                        w = dist(extra[a], extra[b])
                        adj[base + a].append((base + b, w))
                        adj[base + b].append((base + a, w))
        return extra, vids, adj

    def shortest(self, x, y) -> tuple[float, GeodesicPath]:
        (x, y), _, extra_adj = self.graph_with([x, y])
        src, dst = self.n_static, self.n_static + 1
        if x == y:
            return 0.0, GeodesicPath((x, y), 0.0)
        dist_to = {src: 0.0}
        prev = {}
        heap = [(0.0, src)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            if u == dst:
                break
            nbrs = extra_adj.get(u, [])
            if u < self.n_static:
                nbrs = self.adj[u] + nbrs
            for v, w in nbrs:
                nd = d + w
                if nd < dist_to.get(v, math.inf):
                    dist_to[v] = nd
                    prev[v] = u
                    heapq.heappush(heap, (nd, v))
        if dst not in done:
            raise Unreachable(f"no path from {x} to {y}")
        chain = [dst]
        while chain[-1] != src:
            chain.append(prev[chain[-1]])
        chain.reverse()
        pts = []
        for nd in chain:
            p = x if nd == src else y if nd == dst else self.vertices[self.node_vertex[nd]]
            if not pts or pts[-1] != p:
                pts.append(p)
        if len(pts) == 1:
            pts.append(pts[0])
        pts = self._straighten(pts)
        length = polyline_length(pts)
        return length, GeodesicPath(tuple(Point(*p) for p in pts), length)

    def _straighten(self, pts: list) -> list:
        """Drop point obstacles that a path passes straight through."""
        obstacles = {self.vertices[i] for i in self.g.point_ids}
        out = [pts[0]]
        for k in range(1, len(pts) - 1):
            p = pts[k]
            if p in obstacles and in_open_segment(p, out[-1], pts[k + 1]):
                continue
            out.append(p)
        out.append(pts[-1])
        return out

    def path_is_valid(self, path: GeodesicPath) -> bool:
        """Every leg is admissible with consistent sectors at the turning vertices."""
        pts = list(path.vertices)
        if len(pts) == 2 and pts[0] == pts[1]:
            return True
        index = {p: i for i, p in enumerate(self.vertices)}
        ids = [index.get(p) for p in pts]
        # sector sets reachable at each turning vertex must agree between legs
        prev_sectors = None
        for k in range(len(pts) - 1):
            pid = ids[k] if (0 < k or self.domain.classify(pts[k]) != INSIDE) else None
            qid = ids[k + 1] if (k + 1 < len(pts) - 1 or self.domain.classify(pts[k + 1]) != INSIDE) else None
            opts = self.edge_options(pts[k], pts[k + 1], pid, qid)
            if not opts:
                return False
            if prev_sectors is not None and pid is not None:
                if not any(sp in prev_sectors for sp, _ in opts):
                    return False
                opts = [(sp, sq) for sp, sq in opts if sp in prev_sectors]
            prev_sectors = {sq for _, sq in opts}
        return math.isclose(polyline_length(pts), path.length, rel_tol=0, abs_tol=1e-12)


def _wrap(a: float) -> float:
    return (a + math.pi) % _TWO_PI - math.pi


def _restrict(opts: list, sides: set) -> list:
    return [(s, side) for s, side in opts if side is None or side in sides]


@lru_cache(maxsize=64)
def engine_for(domain: PolygonalDomain) -> GeodesicEngine:
    domain.validate(connectivity=False)
    return GeodesicEngine(domain)


@lru_cache(maxsize=64)
def domain_is_connected(domain: PolygonalDomain) -> bool:
    eng = engine_for(domain)
    if eng.n_static == 0:
        return True
    uf = UnionFind(eng.n_static)
    for a, b, _ in eng.static_edges:
        uf.union(a, b)
    return len({uf.find(i) for i in range(eng.n_static)}) == 1


def build_visibility(domain: PolygonalDomain, extra: Sequence = ()) -> VisibilityGraph:
    """Visibility graph on query points followed by the boundary sector nodes."""
    domain.validate()
    eng = engine_for(domain)
    extra, vids, extra_adj = eng.graph_with(extra)
    nq = len(extra)
    remap = lambda nd: nd + nq if nd < eng.n_static else nd - eng.n_static  # noqa: E731
    nodes = list(extra) + [eng.vertices[v] for v in eng.node_vertex]
    node_vertex = list(vids) + list(eng.node_vertex)
    node_sector = [None] * nq + list(eng.node_sector)
    edges = set()
    for a, b, w in eng.static_edges:
        edges.add((min(remap(a), remap(b)), max(remap(a), remap(b)), w))
    for a, links in extra_adj.items():
        for b, w in links:
            i, j = remap(a), remap(b)
            edges.add((min(i, j), max(i, j), w))
    return VisibilityGraph(tuple(nodes), tuple(sorted(edges)), tuple(node_vertex), tuple(node_sector))


def inner_distance(domain: PolygonalDomain, x, y) -> tuple[float, GeodesicPath]:
    """Length of the shortest path from x to y in the closure of the domain."""
    domain.validate()
    for p in (x, y):
        # a query point inside a boundary edge becomes a vertex of that edge
        p = as_point(p)
        if domain.classify(p) == BOUNDARY and p not in domain.boundary.vertices:
            domain = domain.with_boundary_vertex(p)
    eng = engine_for(domain)
    d, path = eng.shortest(x, y)
    if not eng.path_is_valid(path):
        raise RuntimeError(f"geodesic certificate failed to re-validate: {path}")
    return d, path
