import math

import numpy as np
import pytest

from innerdist.domain import PolygonalDomain, comb_domain
from innerdist.geom import INSIDE, SimplePolygon, polygon_contains
from innerdist.painleve import ConnectedSet

SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def square_slit():
    return PolygonalDomain(SQUARE, slits=[[(0.5, 0.0), (0.5, 0.75)]])


def slit_plane():
    return PolygonalDomain(slits=[[(0.0, -1.0), (0.0, 1.0)]])


def three_slits():
    return PolygonalDomain(slits=[[(0, -1), (0, 1)], [(1, -0.5), (1, 1.5)], [(2, -1), (2.5, 0), (2, 1)]])


def square_hole():
    return PolygonalDomain(SQUARE, holes=[[(0.3, 0.3), (0.7, 0.35), (0.5, 0.7)]])


def two_slits():
    return PolygonalDomain(SQUARE, slits=[[(0.3, 0.0), (0.3, 0.7)], [(0.7, 1.0), (0.7, 0.3)]])


def mixed():
    # hole, free-standing slit, bent slit touching the outer edge, point obstacles
    return PolygonalDomain(
        [(0, 0), (3, 0), (3, 2), (0, 2)],
        holes=[[(0.5, 0.5), (1.0, 0.5), (1.0, 1.2), (0.5, 1.2)]],
        slits=[[(1.5, 0.4), (1.5, 1.6)], [(2.2, 2.0), (2.2, 1.0), (2.6, 0.8)]],
        points=[(2.0, 0.3), (0.3, 1.6)],
    )


NAMED_DOMAINS = {
    "square+slit": square_slit,
    "comb4": lambda: comb_domain(4),
    "hole": square_hole,
    "two-slits": two_slits,
    "mixed": mixed,
    "3-slit plane": three_slits,
}


def random_polyline(rng, k_min=2, k_max=7, step=(0.05, 0.6)) -> ConnectedSet:
    """Random walk polyline as a connected segment set."""
    n = int(rng.integers(k_min, k_max))
    p = rng.uniform(-1, 1, 2)
    pts = [tuple(map(float, p))]
    for _ in range(n):
        ang = rng.uniform(0, 2 * math.pi)
        p = p + rng.uniform(*step) * np.array([math.cos(ang), math.sin(ang)])
        q = tuple(map(float, p))
        if q != pts[-1]:
            pts.append(q)
    return ConnectedSet(tuple(zip(pts, pts[1:])))


def random_star_polygon(rng, n_min=3, n_max=12) -> SimplePolygon:
    """Star-shaped about the origin, hence simple."""
    n = int(rng.integers(n_min, n_max + 1))
    ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    while len(set(ang)) < n or np.diff(np.r_[ang, ang[0] + 2 * math.pi]).max() >= math.pi:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    rad = rng.uniform(0.3, 1.0, n)
    return SimplePolygon(tuple((float(r * math.cos(a)), float(r * math.sin(a))) for r, a in zip(rad, ang)))


def interior_point(rng, poly: SimplePolygon):
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    while True:
        p = (float(rng.uniform(min(xs), max(xs))), float(rng.uniform(min(ys), max(ys))))
        if polygon_contains(poly, p) == INSIDE:
            return p


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
