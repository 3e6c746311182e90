import math

import numpy as np
import pytest

from conftest import random_polyline
from innerdist.errors import InfeasibleTolerance, InvalidInput
from innerdist.geom import ConvexHull, convex_hull, dist, hull_boundary_h1
from innerdist.painleve import (
    ConnectedSet,
    hull_double_length_check,
    inflate,
    painleve_cover,
    pi_bound_check,
    split_connected_set,
)

UNIT = ConnectedSet((((0, 0), (1, 0)),))
L_SHAPE = ConnectedSet((((0, 0), (1, 0)), ((1, 0), (1, 1))))

# achieved sums, frozen from the first run
UNIT_COVER_SUM = 2.0499987450243524
L_COVER_SUM = 4.099997490048705


def _diam(piece):
    pts = piece.vertices
    return max(dist(a, b) for a in pts for b in pts)


def test_connected_set_validation():
    with pytest.raises(InvalidInput):
        ConnectedSet(())
    with pytest.raises(InvalidInput):
        ConnectedSet((((0, 0), (1, 0)), ((2, 0), (3, 0))))


def test_split_examples():
    pieces = split_connected_set(UNIT, 0.6)
    assert [sorted(s.a[0] for s in p.segments) + sorted(s.b[0] for s in p.segments) for p in pieces] == [
        [0.0, 0.6],
        [0.6, 1.0],
    ]
    assert len(split_connected_set(UNIT, 2)) == 1
    pieces = split_connected_set(L_SHAPE, 0.75)
    assert math.fsum(p.h1 for p in pieces) == pytest.approx(2.0, abs=1e-12)
    assert all(_diam(p) <= 1.5 + 1e-12 for p in pieces)


def test_split_random_sets(rng):
    for _ in range(100):
        K = random_polyline(rng)
        r = float(rng.uniform(0.02, 0.5))
        pieces = split_connected_set(K, r)
        assert math.fsum(p.h1 for p in pieces) == pytest.approx(K.h1, abs=1e-12)
        assert all(_diam(p) <= 2 * r + 1e-12 for p in pieces)


def test_inflate_perimeter_budget():
    hull = convex_hull([(0, 0), (1, 0), (1, 1), (0, 2)])
    for delta in (0.01, 0.3):
        big = inflate(hull, delta)
        per = hull_boundary_h1(big)
        assert per <= hull_boundary_h1(hull) + 2 * math.pi * delta
        assert per >= hull_boundary_h1(hull) + 2 * math.pi * delta * 0.999
    disk = inflate(ConvexHull("point", ((0.0, 0.0),)), 1.0)
    assert hull_boundary_h1(disk) < 2 * math.pi
    seg = inflate(convex_hull([(0, 0), (1, 0)]), 0.1)
    assert hull_boundary_h1(seg) <= 2 + 2 * math.pi * 0.1


def test_cover_unit_segment():
    cert = painleve_cover(UNIT, 0.5, 0.1)
    assert cert.satisfied and cert.sum_boundary <= 2.1
    assert cert.sum_boundary == pytest.approx(UNIT_COVER_SUM, abs=1e-9)


def test_cover_l_shape():
    cert = painleve_cover(L_SHAPE, 0.5, 0.2)
    assert cert.satisfied and cert.sum_boundary <= 4.2
    assert cert.sum_boundary == pytest.approx(L_COVER_SUM, abs=1e-9)


def test_cover_tiny_segment():
    K = ConnectedSet((((0, 0), (1e-6, 0)),))
    cert = painleve_cover(K, 0.5, 0.05)
    assert cert.sum_boundary <= 2e-6 + 0.05


def test_cover_pieces_stay_close(rng):
    for _ in range(20):
        K = random_polyline(rng)
        cert = painleve_cover(K, 0.1, 0.05)
        assert cert.contains_K and cert.inside_U
        assert cert.boundary_curves == "convex polygons"


def test_cover_infeasible_reports_certificate(monkeypatch):
    import innerdist.painleve as pl

    fat = pl.inflate
    monkeypatch.setattr(pl, "inflate", lambda hull, delta, resolution=256: fat(hull, 1.0, resolution))
    with pytest.raises(InfeasibleTolerance) as err:
        painleve_cover(UNIT, 0.5, 0.1, retries=2)
    cert = err.value.certificate
    assert cert is not None and not cert.satisfied and cert.sum_boundary > cert.bound


def test_cover_rejects_bad_arguments():
    with pytest.raises(InvalidInput):
        painleve_cover(UNIT, 0.0, 0.1)
    with pytest.raises(InvalidInput):
        painleve_cover(UNIT, 0.5, 0.1, retries=-1)


def test_hull_check_examples():
    h, ratio = hull_double_length_check(L_SHAPE)
    assert h == pytest.approx(2 + math.sqrt(2)) and ratio == pytest.approx(1 + math.sqrt(2) / 2)
    assert hull_double_length_check(UNIT) == (1.0, 1.0)
    hh = 0.01
    V = ConnectedSet((((-1, hh), (0, 0)), ((0, 0), (1, hh))))
    h, ratio = hull_double_length_check(V)
    assert h == pytest.approx(2 * math.hypot(1, hh) + 2, abs=1e-12)
    assert ratio > 1.98


def test_hull_ratio_below_two(rng):
    for _ in range(300):
        assert hull_double_length_check(random_polyline(rng))[1] <= 2 + 1e-9


def test_pi_bound_examples():
    two = [ConnectedSet((((0, 0), (1, 0)),)), ConnectedSet((((0, 1), (1, 1)),))]
    cert = pi_bound_check(two, 0.2)
    assert cert.sum_boundary <= 4.2 and cert.satisfied
    pts = [(float(i), 0.0) for i in range(5)]
    cert = pi_bound_check(pts, 0.1)
    assert cert.h1 == 0 and cert.sum_boundary <= 0.1
    cert = pi_bound_check([UNIT, (0.5, 1.0)], 0.1)
    assert cert.sum_boundary <= 2.1 and cert.clearance == pytest.approx(0.5)


def test_pi_bound_rejects_overlap():
    with pytest.raises(InvalidInput):
        pi_bound_check([UNIT, (0.5, 0.0)], 0.1)
    with pytest.raises(InvalidInput):
        pi_bound_check([], 0.1)


def test_samples_cover_segments():
    s = L_SHAPE.samples(4)
    assert len(s) == 3 + 2 * 4
    assert np.all((s >= -1e-12) & (s <= 1 + 1e-12))
