"""Checks of the inner-distance bounds on polygonal instances."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .domain import (
    PolygonalDomain,
    comb_domain,
    comb_dropped_slits,
    decompose_boundary,
)
from .errors import DegenerateConfiguration, InvalidInput, Unreachable
from .geodesic import GeodesicPath, inner_distance
from .geom import (
    INSIDE,
    Point,
    Polyline,
    SimplePolygon,
    as_point,
    dist,
    orientation,
    polygon_contains,
    segments_intersect,
)

TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    pair: tuple
    distance: float
    euclidean: float
    h1_E: float
    h1_boundary: float
    q: float
    bound_value: float
    classic_bound: float
    margin: float
    satisfied: bool
    classic_satisfied: bool
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.satisfied and self.classic_satisfied


def _report(domain, dec, x, y) -> BoundReport:
    euclid = dist(x, y)
    q = 0.0 if domain.bounded else euclid
    bound = q + dec.h1_E
    classic = euclid + math.pi / 2 * dec.h1_total
    try:
        d, _ = inner_distance(domain, x, y)
    except (InvalidInput, Unreachable) as exc:
        nan = math.nan
        return BoundReport((x, y), nan, euclid, dec.h1_E, dec.h1_total, q, bound, classic, nan,
                           False, False, f"{type(exc).__name__}: {exc}")
    return BoundReport(
        (x, y), d, euclid, dec.h1_E, dec.h1_total, q, bound, classic, bound - d,
        d <= bound + TOL, d <= classic + TOL,
    )


def verify_main_theorem(domain: PolygonalDomain, pairs: Sequence, workers: int = 1) -> list:
    """One BoundReport per pair, in input order; failures are reported, not raised."""
    dec = decompose_boundary(domain)
    pairs = [(as_point(x), as_point(y)) for x, y in pairs]
    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda p: _report(domain, dec, *p), pairs))
    return [_report(domain, dec, x, y) for x, y in pairs]


def random_pairs(dom: PolygonalDomain, n: int, seed: int) -> list:
    """Seeded rejection sampling of pairs of points inside the open domain."""
    rng = np.random.default_rng(seed)
    lo_x, lo_y, hi_x, hi_y = dom.extent()
    if not dom.bounded:
        pad = max(hi_x - lo_x, hi_y - lo_y, 1.0) * 0.25
        lo_x, lo_y, hi_x, hi_y = lo_x - pad, lo_y - pad, hi_x + pad, hi_y + pad
    pts = []
    tries = 0
    while len(pts) < 2 * n:
        tries += 1
        if tries > 1000 * (2 * n + 1):
            raise InvalidInput("could not sample interior points")
        p = (float(rng.uniform(lo_x, hi_x)), float(rng.uniform(lo_y, hi_y)))
        if dom.classify(p) == INSIDE:
            pts.append(p)
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(n)]


def batch_status(reports: Sequence[BoundReport]) -> int:
    """0 when every report holds, 1 otherwise."""
    return 0 if all(r.ok for r in reports) else 1


@dataclass(frozen=True)
class SweepRow:
    n: int
    distance: float
    h1_E: float
    ratio: float
    dropped_slits: int


def sweep_pair(n: int) -> tuple[Point, Point]:
    # x right of every slit, y left of the leftmost slit at 1/(2n+1)
    return Point(0.9, 0.5), Point(1 / (4 * (n + 1)), 0.5)


def sharpness_sweep(n_values: Sequence[int]) -> list[SweepRow]:
    rows = []
    for n in n_values:
        dom = comb_domain(n)
        x, y = sweep_pair(n)
        d, _ = inner_distance(dom, x, y)
        h1 = decompose_boundary(dom).h1_E
        rows.append(SweepRow(n, d, h1, d / h1, comb_dropped_slits(n)))
    return rows


def ratios_nondecreasing(rows: Sequence[SweepRow], tol: float = TOL) -> bool:
    return all(b.ratio >= a.ratio - tol for a, b in zip(rows, rows[1:]))


@dataclass(frozen=True)
class Detour:
    gamma6: Polyline
    gamma7: Polyline
    perimeter: float

    @property
    def lengths(self) -> tuple[float, float]:
        return self.gamma6.length, self.gamma7.length

    @property
    def holds(self) -> bool:
        l6, l7 = self.lengths
        return l6 + l7 <= self.perimeter + TOL and min(l6, l7) <= self.perimeter / 2 + TOL


def _first_hit(verts, cum, p, d) -> tuple[float, Point]:
    """Arclength position and point where the ray p + s d (s > 0) first meets the ring."""
    n = len(verts)
    best = None
    q = (p[0] + d[0], p[1] + d[1])
    for k in range(n):
        a, b = verts[k], verts[(k + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        den = d[0] * ey - d[1] * ex
        oa, ob = orientation(p, q, a), orientation(p, q, b)
        if oa == 0 and ob == 0:
            s_a = (a[0] - p[0]) * d[0] + (a[1] - p[1]) * d[1]
            s_b = (b[0] - p[0]) * d[0] + (b[1] - p[1]) * d[1]
            if max(s_a, s_b) > 0:
                raise DegenerateConfiguration("perpendicular runs along an edge")
            continue
        if oa * ob > 0:
            continue
        wx, wy = a[0] - p[0], a[1] - p[1]
        s = (wx * ey - wy * ex) / den
        if s <= 0:
            continue
        if oa == 0 or ob == 0:
            # through a vertex: transversal only if the two incident edges
            # leave on opposite sides of the line
            vi = k if oa == 0 else (k + 1) % n
            prev, nxt = verts[vi - 1], verts[(vi + 1) % n]
            if orientation(p, q, prev) * orientation(p, q, nxt) >= 0:
                raise DegenerateConfiguration("perpendicular is tangent at a vertex")
            t = 0.0 if oa == 0 else 1.0
        else:
            t = (wx * d[1] - wy * d[0]) / den
        if best is None or s < best[0]:
            pos = cum[vi] if (oa == 0 or ob == 0) else cum[k] + t * dist(a, b)
            pt = verts[vi] if (oa == 0 or ob == 0) else Point(a[0] + t * ex, a[1] + t * ey)
            best = (s, pos, pt)
    if best is None:
        raise DegenerateConfiguration("perpendicular does not meet the boundary")
    return best[1], best[2]


def _arc(verts, cum, per, s_from, p_from, s_to, p_to, forward: bool) -> list:
    """Boundary points from p_from to p_to walking ccw (forward) or cw."""
    n = len(verts)
    out = [p_from]
    if forward:
        span = (s_to - s_from) % per
        inner = sorted(((cum[i] - s_from) % per, i) for i in range(n))
        out += [verts[i] for off, i in inner if 0 < off < span]
    else:
        span = (s_from - s_to) % per
        inner = sorted(((s_from - cum[i]) % per, i) for i in range(n))
        out += [verts[i] for off, i in inner if 0 < off < span]
    out.append(p_to)
    return out


def _dedupe(pts) -> list:
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(Point(*p))
    return out


def boundary_detour(W: SimplePolygon, x, y) -> Detour:
    """Two curves x -> y made of perpendicular legs at x and y and a boundary arc.

    Their lengths add up to at most the perimeter of W.
    """
    x, y = as_point(x), as_point(y)
    if x == y:
        raise InvalidInput("x and y must differ")
    W = W.ccw()
    if polygon_contains(W, x) != INSIDE or polygon_contains(W, y) != INSIDE:
        raise InvalidInput("x and y must lie strictly inside the polygon")
    verts = W.vertices
    n = len(verts)
    cum = [0.0]
    for i in range(n - 1):
        cum.append(cum[-1] + dist(verts[i], verts[i + 1]))
    per = W.perimeter
    t = (y[0] - x[0], y[1] - x[1])
    normal = (-t[1], t[0])
    back = (t[1], -t[0])
    s1, u1 = _first_hit(verts, cum, x, normal)
    s3, u3 = _first_hit(verts, cum, x, back)
    s2, u2 = _first_hit(verts, cum, y, normal)
    s4, u4 = _first_hit(verts, cum, y, back)

    def contains(s_from, s_to, forward, others):
        span = (s_to - s_from) % per if forward else (s_from - s_to) % per
        offs = [((o - s_from) % per if forward else (s_from - o) % per) for o in others]
        return any(0 <= off <= span for off in offs)

    def pick(sa, sb, others):
        for forward in (True, False):
            if not contains(sa, sb, forward, others):
                return forward
        raise DegenerateConfiguration("perpendicular chords interleave on the boundary")

    f12 = pick(s1, s2, (s3, s4))
    f34 = pick(s3, s4, (s1, s2))
    g6 = _dedupe([x] + _arc(verts, cum, per, s1, u1, s2, u2, f12) + [y])
    g7 = _dedupe([x] + _arc(verts, cum, per, s3, u3, s4, u4, f34) + [y])
    return Detour(Polyline(tuple(g6)), Polyline(tuple(g7)), per)


def is_injective(path) -> bool:
    """No repeated vertices and no two non-adjacent legs meet."""
    pts = list(path.vertices)
    if len(set(pts)) != len(pts):
        return False
    legs = list(zip(pts, pts[1:]))
    for i in range(len(legs)):
        for j in range(i + 2, len(legs)):
            if segments_intersect(*legs[i], *legs[j]):
                return False
    return True


def accessibility_curve(domain: PolygonalDomain, x, y, eps: float) -> GeodesicPath:
    """Injective polygonal curve from interior x to boundary point y.

    A boundary point inside an edge is promoted to a vertex first.
    """
    if not domain.bounded:
        raise InvalidInput("accessibility curves need a bounded domain")
    y = as_point(y)
    refined = domain.with_boundary_vertex(y)
    d, path = inner_distance(refined, x, y)
    limit = decompose_boundary(refined).h1_total + eps
    if not is_injective(path):
        raise RuntimeError(f"accessibility curve is not injective: {path}")
    if not d <= limit:
        raise RuntimeError(f"accessibility curve too long: {d} > {limit}")
    return path
