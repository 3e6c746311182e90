import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerdist.errors import InvalidInput
from innerdist.fractal import (
    ball_count,
    fractal_level,
    fractal_stats,
    hull_lower_probe,
    level_radius,
    min_gap,
    nesting_ok,
    sibling_gap,
    sibling_gap_check,
)


def test_level_one():
    L = fractal_level(1)
    assert L.balls == [((0.0, 0.0), 1.0)]
    s = fractal_stats(L)
    assert (s.count, s.radius, s.diameter_sum, s.min_gap) == (1, 1.0, 2.0, math.inf)


def test_level_two():
    L = fractal_level(2)
    assert L.radius == 0.25
    for j, (c, r) in enumerate(L.balls, 1):
        assert c == pytest.approx((0.75 * math.cos(j * math.pi / 2), 0.75 * math.sin(j * math.pi / 2)), abs=1e-15)


@pytest.mark.parametrize("k", range(1, 7))
def test_counts_and_radius(k):
    L = fractal_level(k)
    assert L.count == ball_count(k)
    assert L.radius == level_radius(k)
    if k > 1:
        assert L.count == 2 ** (k * (k + 1) // 2 - 1)
        assert L.radius == 2.0 ** -(k * (k + 1) // 2 - 1)
    assert fractal_level(k).count * 2 * L.radius == 2.0


def test_examples_k3_k4():
    assert fractal_stats(fractal_level(3)).diameter_sum == 2.0
    s = fractal_stats(fractal_level(4))
    assert s.count == 512 and s.radius == 2.0**-9
    assert abs(s.diameter_sum - 2) <= 1e-12


@pytest.mark.parametrize("k", [0, 7, 2.0, -1])
def test_level_out_of_range(k):
    with pytest.raises(InvalidInput):
        fractal_level(k)


@pytest.mark.parametrize("k", range(1, 5))
def test_nesting(k):
    assert nesting_ok(fractal_level(k), fractal_level(k + 1))


def test_nesting_rejects_skipped_level():
    with pytest.raises(InvalidInput):
        nesting_ok(fractal_level(1), fractal_level(3))


@pytest.mark.parametrize("k", range(2, 6))
def test_disjoint_and_gap_matches_sibling_scale(k):
    L = fractal_level(k)
    g = min_gap(L)
    assert g > 0
    # closest pair are adjacent siblings of the newest map
    assert g == pytest.approx(sibling_gap(k, level_radius(k - 1)), rel=1e-9)


def test_kdtree_gap_agrees_with_brute_force():
    L = fractal_level(4)
    c = L.centers
    brute = min(math.dist(c[i], c[j]) for i, j in combinations(range(len(c)), 2)) - 2 * L.radius
    assert min_gap(L) == pytest.approx(brute, abs=1e-15)
    from scipy.spatial import cKDTree

    dd, _ = cKDTree(c).query(c, k=2)
    assert dd[:, 1].min() - 2 * L.radius == pytest.approx(brute, abs=1e-15)


def test_sibling_gap_examples():
    a, b, ok = sibling_gap_check(3, 1.0)
    assert a == pytest.approx(0.41970, abs=1e-5) and b == pytest.approx(0.75 * math.sin(math.pi / 8)) and ok
    a, b, ok = sibling_gap_check(2, 1.0)
    assert a == pytest.approx(1.5 * math.sin(math.pi / 4) - 0.5) and b == pytest.approx(0.5 * math.sin(math.pi / 4))
    with pytest.raises(InvalidInput):
        sibling_gap_check(1)


@given(st.integers(2, 30), st.floats(1e-6, 10))
def test_sibling_gap_inequality(k0, r):
    a, b, ok = sibling_gap_check(k0, r)
    assert ok and a > 0


def test_hull_probe_examples():
    p = hull_lower_probe(3, [1, 2, 3], 256)
    assert p.satisfied
    p = hull_lower_probe(3, range(1, 9), 256)
    # the sibling disks touch the unit circle only at eight points
    assert math.pi < p.hull_perimeter < 2 * math.pi
    assert p.hull_perimeter == pytest.approx(2 * math.pi, rel=0.03)
    assert p.measure_weight == pytest.approx(math.pi)


def test_hull_probe_errors():
    with pytest.raises(InvalidInput):
        hull_lower_probe(3, [1, 2])
    with pytest.raises(InvalidInput):
        hull_lower_probe(3, [1, 2, 9])
    with pytest.raises(InvalidInput):
        hull_lower_probe(3, [1, 2, 3], 32)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 5), st.data())
def test_hull_probe_random_subsets(k0, data):
    n = 2**k0
    idx = data.draw(st.sets(st.integers(1, n), min_size=3, max_size=n))
    assert hull_lower_probe(k0, sorted(idx), 128).satisfied


def test_balls_match_centers():
    L = fractal_level(3)
    assert np.allclose([b[0] for b in L.balls], L.centers)
