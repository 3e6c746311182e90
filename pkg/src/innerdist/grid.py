"""Grid-graph upper bound on inner distance.

Independent of the visibility engine: lattice nodes strictly inside the domain
joined along 16 directions, each edge kept only when it stays clear of every
boundary segment.  Any path found is admissible, so the value is an upper
bound that converges as the spacing shrinks.
"""
from __future__ import annotations

import math
from collections import OrderedDict

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .domain import PolygonalDomain
from .errors import InvalidInput, Unreachable
from .geom import as_point, point_segments_distance, polygon_contains_many

# undirected half of the 16 primitive offsets with Chebyshev norm <= 2
OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))
_NEAR = 1e-9
_TOL = 1e-12


def _separated(p, q, a, b) -> np.ndarray:
    """Mask of rows where closed segments [p, q] and [a, b] are certainly disjoint."""

    def orient(u, v, w):
        return (v[..., 0] - u[..., 0]) * (w[..., 1] - u[..., 1]) - (v[..., 1] - u[..., 1]) * (
            w[..., 0] - u[..., 0]
        )

    o1, o2 = orient(a, b, p), orient(a, b, q)
    o3, o4 = orient(p, q, a), orient(p, q, b)
    sep = ((o1 > _TOL) & (o2 > _TOL)) | ((o1 < -_TOL) & (o2 < -_TOL))
    sep |= ((o3 > _TOL) & (o4 > _TOL)) | ((o3 < -_TOL) & (o4 < -_TOL))
    # collinear-ish pairs: disjoint if their bounding boxes are apart
    lo1, hi1 = np.minimum(p, q), np.maximum(p, q)
    lo2, hi2 = np.minimum(a, b), np.maximum(a, b)
    apart = np.any((hi1 < lo2 - _TOL) | (hi2 < lo1 - _TOL), axis=-1)
    return sep | apart


class GridGraph:
    def __init__(self, domain: PolygonalDomain, h: float, include=()):
        if not h > 0:
            raise InvalidInput(f"grid spacing must be positive, got {h}")
        self.domain = domain
        self.h = h
        g = domain.boundary
        self.starts, self.ends = g.seg_starts, g.seg_ends
        pts = list(domain.all_vertices()) + [tuple(p) for p in include]
        if not pts:
            pts = [(0.0, 0.0)]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        pad = 2 * h if domain.bounded else 0.25 * span + 2 * h
        # anchor on integers so that dyadic refinements nest
        self.i0 = math.floor(math.floor(min(xs) - pad) / h)
        self.j0 = math.floor(math.floor(min(ys) - pad) / h)
        self.nx = math.ceil(math.ceil(max(xs) + pad) / h) - self.i0 + 1
        self.ny = math.ceil(math.ceil(max(ys) + pad) / h) - self.j0 + 1
        ii, jj = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        self.xy = np.stack([(ii + self.i0) * h, (jj + self.j0) * h], axis=-1).reshape(-1, 2)
        self.free = self._free_nodes()
        self._build_edges()

    def _free_nodes(self) -> np.ndarray:
        dom = self.domain
        free = np.ones(len(self.xy), dtype=bool)
        if dom.outer is not None:
            free &= polygon_contains_many(dom.outer.vertices, self.xy)
        for hole in dom.holes:
            free &= ~polygon_contains_many(hole.vertices, self.xy)
        if len(self.starts):
            near = np.zeros(len(self.xy), dtype=bool)
            for a, b in zip(self.starts, self.ends):
                near[self._near_nodes(a, b, 1)] = True
            idx = np.flatnonzero(free & near)
            d = point_segments_distance(self.xy[idx], self.starts, self.ends)
            free[idx[d <= _NEAR]] = False
        for p in dom.points:
            free &= ~((self.xy[:, 0] == p[0]) & (self.xy[:, 1] == p[1]))
        return free

    def _near_nodes(self, a, b, radius: int) -> np.ndarray:
        """Flat indices of lattice nodes within ``radius`` cells of segment ab."""
        n = max(2, int(math.ceil(2 * math.hypot(b[0] - a[0], b[1] - a[1]) / self.h)) + 1)
        t = np.linspace(0.0, 1.0, n)
        sx = np.floor((a[0] + t * (b[0] - a[0])) / self.h).astype(int) - self.i0
        sy = np.floor((a[1] + t * (b[1] - a[1])) / self.h).astype(int) - self.j0
        r = np.arange(-radius, radius + 2)
        cx = (sx[:, None, None] + r[None, :, None]).ravel()
        cy = (sy[:, None, None] + r[None, None, :]).ravel()
        ok = (cx >= 0) & (cx < self.nx) & (cy >= 0) & (cy < self.ny)
        return np.unique(cy[ok] * self.nx + cx[ok])

    def _build_edges(self) -> None:
        rows, cols, wts = [], [], []
        blocked_near = np.zeros(len(self.xy), dtype=bool)
        for a, b in zip(self.starts, self.ends):
            blocked_near[self._near_nodes(a, b, 3)] = True
        for dx, dy in OFFSETS:
            i = np.arange(self.nx)
            j = np.arange(self.ny)
            ok_i = i[(i + dx >= 0) & (i + dx < self.nx)]
            ok_j = j[(j + dy >= 0) & (j + dy < self.ny)]
            src = (ok_j[:, None] * self.nx + ok_i[None, :]).ravel().astype(np.int32)
            dst = src + dy * self.nx + dx
            keep = self.free[src] & self.free[dst]
            src, dst = src[keep], dst[keep]
            check = blocked_near[src] | blocked_near[dst]
            if check.any():
                cs, cd = src[check], dst[check]
                good = np.ones(len(cs), dtype=bool)
                for a, b in zip(self.starts, self.ends):
                    good &= _separated(self.xy[cs], self.xy[cd], a, b)
                drop = np.flatnonzero(check)[~good]
                mask = np.ones(len(src), dtype=bool)
                mask[drop] = False
                src, dst = src[mask], dst[mask]
            rows.append(src)
            cols.append(dst)
            wts.append(np.full(len(src), self.h * math.hypot(dx, dy)))
        n = len(self.xy)
        self.matrix = coo_matrix(
            (np.concatenate(wts), (np.concatenate(rows), np.concatenate(cols))), shape=(n + 2, n + 2)
        ).tocsr()

    def _links(self, p) -> tuple[np.ndarray, np.ndarray]:
        """Free nodes within 2h of p reachable by a clear straight segment."""
        r = 2 * self.h
        ci = int(math.floor(p[0] / self.h)) - self.i0
        cj = int(math.floor(p[1] / self.h)) - self.j0
        ii, jj = np.meshgrid(np.arange(ci - 2, ci + 4), np.arange(cj - 2, cj + 4))
        ii, jj = ii.ravel(), jj.ravel()
        ok = (ii >= 0) & (ii < self.nx) & (jj >= 0) & (jj < self.ny)
        idx = jj[ok] * self.nx + ii[ok]
        idx = idx[self.free[idx]]
        d = np.hypot(self.xy[idx, 0] - p[0], self.xy[idx, 1] - p[1])
        idx, d = idx[d <= r], d[d <= r]
        good = self._clear(np.asarray(p, dtype=float), self.xy[idx])
        return idx[good], d[good]

    def _clear(self, p: np.ndarray, qs: np.ndarray) -> np.ndarray:
        good = np.ones(len(qs), dtype=bool)
        ps = np.broadcast_to(p, qs.shape)
        for a, b in zip(self.starts, self.ends):
            good &= _separated(ps, qs, a, b)
        return good

    def shortest_path(self, x, y, limit: float = np.inf) -> tuple[float, np.ndarray]:
        """Raw grid path from x to y: (length, vertex coordinates)."""
        x, y = as_point(x), as_point(y)
        if x == y:
            return 0.0, np.array([x, y], dtype=float)
        n = len(self.xy)
        xs, xd = self._links(x)
        ys, yd = self._links(y)
        rows = [np.full(len(xs), n), np.full(len(ys), n + 1)]
        cols = [xs, ys]
        wts = [xd, yd]
        direct = math.hypot(y[0] - x[0], y[1] - x[1])
        if direct <= 2 * self.h and self._clear(np.asarray(x), np.array([y], dtype=float))[0]:
            rows.append(np.array([n]))
            cols.append(np.array([n + 1]))
            wts.append(np.array([direct]))
        w = np.concatenate(wts)
        # zero-length links would vanish from the sparse matrix
        w = np.where(w == 0.0, 1e-300, w)
        links = coo_matrix((w, (np.concatenate(rows), np.concatenate(cols))), shape=(n + 2, n + 2))
        m = (self.matrix + links.tocsr()).tocsr()
        d, pred = dijkstra(m, directed=False, indices=n, return_predecessors=True, limit=limit)
        val = float(d[n + 1])
        if not math.isfinite(val):
            raise Unreachable(f"no grid path at spacing {self.h}")
        chain = [n + 1]
        while chain[-1] != n:
            chain.append(int(pred[chain[-1]]))
        chain.reverse()
        pts = np.array([x] + [tuple(self.xy[k]) for k in chain[1:-1]] + [y], dtype=float)
        return val, pts

    def pull_string(self, pts: np.ndarray) -> float:
        """Length after greedy shortcutting with clear straight segments."""
        out = [pts[0]]
        i, m = 0, len(pts) - 1
        while i < m:
            cand = np.arange(i + 1, m + 1)
            good = self._clear(pts[i], pts[cand])
            j = int(cand[np.flatnonzero(good)[-1]]) if good.any() else i + 1
            out.append(pts[j])
            i = j
        out = np.array(out)
        return float(np.hypot(*np.diff(out, axis=0).T).sum())


_GRID_CACHE: OrderedDict = OrderedDict()
_GRID_CACHE_SIZE = 8


def _grid(domain: PolygonalDomain, h: float, include) -> GridGraph:
    key = (domain, h) if domain.bounded else (domain, h, tuple(map(tuple, include)))
    g = _GRID_CACHE.pop(key, None)
    if g is None:
        g = GridGraph(domain, h, include=() if domain.bounded else include)
    _GRID_CACHE[key] = g
    while len(_GRID_CACHE) > _GRID_CACHE_SIZE:
        _GRID_CACHE.popitem(last=False)
    return g


def grid_path_length(domain: PolygonalDomain, x, y, h: float) -> float:
    """Length of a shortest path in the lattice graph of spacing h (no smoothing)."""
    domain.validate(connectivity=False)
    return _grid(domain, h, (x, y)).shortest_path(x, y)[0]


def grid_oracle(domain: PolygonalDomain, x, y, h: float, coarsest: float | None = None) -> float:
    """Upper bound on the inner distance from lattice paths at spacing h.

    The shortest lattice path is shortened by straight shortcuts that stay
    clear of the boundary.  The result is the best such path over the nested
    lattices h, 2h, 4h, ... up to ``coarsest`` (default: 1/16 of the domain
    span), so halving h never increases the value.
    """
    if not h > 0:
        raise InvalidInput(f"grid spacing must be positive, got {h}")
    domain.validate(connectivity=False)
    x, y = as_point(x), as_point(y)
    if coarsest is None:
        lo_x, lo_y, hi_x, hi_y = domain.extent()
        span = max(hi_x - lo_x, hi_y - lo_y, abs(x[0] - y[0]), abs(x[1] - y[1]), 1e-12)
        coarsest = span / 16
    levels = [h]
    while levels[-1] * 2 <= coarsest:
        levels.append(levels[-1] * 2)
    best = math.inf
    for hk in reversed(levels):
        try:
            _, pts = _grid(domain, hk, (x, y)).shortest_path(x, y)
        except Unreachable:
            continue
        best = min(best, _grid(domain, hk, (x, y)).pull_string(pts))
    if not math.isfinite(best):
        raise Unreachable(f"no grid path at spacing {h}")
    return best
