"""Construction balls of the self-similar set with Painleve length pi * H1.

Level k is the image of the closed unit disk under all compositions
f_{2,j2} o ... o f_{k,jk}, where f_{i,j}(z) = 2^-i z + (1 - 2^-i) exp(i j 2^(1-i) pi)
and 1 <= j <= 2^i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidInput
from .geom import convex_hull, hull_boundary_h1

MAX_LEVEL = 6


@dataclass(frozen=True)
class FractalLevel:
    k: int
    centers: np.ndarray  # (count, 2), index order (j2, ..., jk) with jk fastest
    radius: float

    @property
    def count(self) -> int:
        return len(self.centers)

    @property
    def balls(self) -> list:
        return [((float(x), float(y)), self.radius) for x, y in self.centers]


def ball_count(k: int) -> int:
    return 1 if k == 1 else 2 ** (k * (k + 1) // 2 - 1)


def level_radius(k: int) -> float:
    return 2.0 ** -(k * (k + 1) // 2 - 1) if k > 1 else 1.0


def sibling_offsets(i: int) -> np.ndarray:
    """Translation parts (1 - 2^-i) exp(i j 2^(1-i) pi), j = 1..2^i."""
    j = np.arange(1, 2**i + 1)
    ang = j * 2.0 ** (1 - i) * math.pi
    return (1 - 2.0**-i) * np.stack([np.cos(ang), np.sin(ang)], axis=1)


def fractal_level(k: int) -> FractalLevel:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_LEVEL:
        raise InvalidInput(f"level must be an integer in 1..{MAX_LEVEL}, got {k!r}")
    centers = np.zeros((1, 2))
    # apply the innermost map first: f_k, then f_{k-1}, ..., f_2
    for i in range(k, 1, -1):
        off = sibling_offsets(i)
        centers = (2.0**-i * centers[None, :, :] + off[:, None, :]).reshape(-1, 2)
    return FractalLevel(k, centers, level_radius(k))


def min_gap(level: FractalLevel) -> float:
    """Smallest distance between the boundaries of two distinct balls."""
    if level.count < 2:
        return math.inf
    if level.count <= 1024:
        c = level.centers
        d = np.hypot(c[:, None, 0] - c[None, :, 0], c[:, None, 1] - c[None, :, 1])
        np.fill_diagonal(d, np.inf)
        nearest = d.min()
    else:
        dd, _ = cKDTree(level.centers).query(level.centers, k=2)
        nearest = dd[:, 1].min()
    return float(nearest - 2 * level.radius)


@dataclass(frozen=True)
class FractalStats:
    count: int
    radius: float
    diameter_sum: float
    min_gap: float


def fractal_stats(level: FractalLevel) -> FractalStats:
    return FractalStats(level.count, level.radius, level.count * 2 * level.radius, min_gap(level))


def nesting_ok(parent: FractalLevel, child: FractalLevel, tol: float = 1e-12) -> bool:
    """Each child ball sits inside exactly one parent ball."""
    if child.k != parent.k + 1:
        raise InvalidInput("levels must be consecutive")
    per = 2 ** child.k
    owner = np.repeat(np.arange(parent.count), per)
    gap = np.hypot(*(child.centers - parent.centers[owner]).T) + child.radius
    if not (gap <= parent.radius + tol).all():
        return False
    reach = parent.radius - child.radius + tol
    hits = cKDTree(parent.centers).query_ball_point(child.centers, reach, return_length=True)
    return bool((hits == 1).all())


def sibling_gap(k0: int, r: float = 1.0) -> float:
    """Gap between adjacent level-k0 balls inside a parent ball of radius r."""
    return 2 * (1 - 2.0**-k0) * r * math.sin(2.0**-k0 * math.pi) - 2 * 2.0**-k0 * r


def sibling_gap_check(k0: int, parent_radius: float = 1.0, tol: float = 1e-12) -> tuple[float, float, bool]:
    """(actual gap, lower bound (1 - 2^(1-k0)) sin(2^-k0 pi) r, actual >= bound)."""
    if k0 < 2:
        raise InvalidInput("k0 must be at least 2")
    actual = sibling_gap(k0, parent_radius)
    bound = (1 - 2.0 ** (1 - k0)) * math.sin(2.0**-k0 * math.pi) * parent_radius
    return actual, bound, actual >= bound - tol


@dataclass(frozen=True)
class HullProbe:
    hull_perimeter: float
    measure_weight: float
    satisfied: bool


def hull_lower_probe(k0: int, indices: Sequence[int], circle_resolution: int = 256, tol: float = 1e-12) -> HullProbe:
    """Hull perimeter of selected sibling balls against (1 - 2^(2-k0)) pi N d.

    Balls are replaced by inscribed regular polygons, so the computed perimeter
    is a lower bound for the true hull perimeter.
    """
    idx = sorted(set(int(i) for i in indices))
    if len(idx) < 3:
        raise InvalidInput("the probe needs at least three balls")
    if k0 < 2 or idx[0] < 1 or idx[-1] > 2**k0:
        raise InvalidInput(f"indices must lie in 1..{2**k0}")
    if circle_resolution < 64:
        raise InvalidInput("circle_resolution must be at least 64")
    rho = 2.0**-k0
    centers = sibling_offsets(k0)[np.array(idx) - 1]
    t = 2 * math.pi * np.arange(circle_resolution) / circle_resolution
    ring = rho * np.stack([np.cos(t), np.sin(t)], axis=1)
    pts = (centers[:, None, :] + ring[None, :, :]).reshape(-1, 2)
    per = hull_boundary_h1(convex_hull(map(tuple, pts)))
    weight = (1 - 2.0 ** (2 - k0)) * math.pi * len(idx) * 2 * rho
    return HullProbe(per, weight, per >= weight - tol)
