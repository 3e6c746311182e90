"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""
import io as stdio
import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import (
    SQUARE,
    interior_point,
    mixed,
    random_polyline,
    random_star_polygon,
    slit_plane,
    square_hole,
    square_slit,
    three_slits,
    two_slits,
)
from innerdist import io
from innerdist.cli import main
from innerdist.domain import PolygonalDomain, comb_domain
from innerdist.errors import DegenerateConfiguration, Unreachable
from innerdist.fractal import (
    fractal_level,
    fractal_stats,
    hull_lower_probe,
    level_radius,
    nesting_ok,
    sibling_gap,
    sibling_gap_check,
)
from innerdist.geodesic import inner_distance
from innerdist.geom import dist
from innerdist.grid import grid_oracle
from innerdist.painleve import ConnectedSet, hull_double_length_check, painleve_cover
from innerdist.verifier import (
    boundary_detour,
    random_pairs,
    ratios_nondecreasing,
    sharpness_sweep,
    sweep_pair,
    verify_main_theorem,
)

TOL = 1e-9
RESULTS = []

# d / H1(E) on comb(n) with the fixed pair rule, frozen after the oracle cross-check below
SWEEP_BASELINE = {
    2: 0.16333333333333333,
    4: 0.30367055626835615,
    6: 0.44211892363016886,
    8: 0.5379526034929841,
    10: 0.6057724484093914,
}


def record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@contextmanager
def timer():
    box = {}
    t0 = time.perf_counter()
    yield box
    box["s"] = time.perf_counter() - t0


def test_c01_analytic_geodesics():
    with timer() as t:
        d1, _ = inner_distance(slit_plane(), (-1, 0), (1, 0))
        d2, _ = inner_distance(square_slit(), (0.25, 0.5), (0.75, 0.5))
    e1, e2 = abs(d1 - 2 * math.sqrt(2)), abs(d2 - math.sqrt(0.5))
    ok = e1 <= 1e-9 and e2 <= 1e-9 and t["s"] < 1
    record(1, ok, f"slit {d1:.12f} (err {e1:.1e}), square+slit {d2:.12f} (err {e2:.1e}), {t['s']:.2f}s < 1s")
    assert ok


def test_c02_main_theorem_harness():
    domains = {
        "square+slit": square_slit(),
        "comb4": comb_domain(4),
        "comb8": comb_domain(8),
        "3-slit plane": three_slits(),
    }
    bad_main = bad_classic = errors = 0
    worst = 0.0
    with timer() as t:
        for k, dom in enumerate(domains.values()):
            for r in verify_main_theorem(dom, random_pairs(dom, 100, 100 + k)):
                errors += r.error is not None
                bad_main += not r.distance <= r.q + r.h1_E + TOL
                bad_classic += not r.distance <= r.euclidean + math.pi / 2 * r.h1_boundary + TOL
                worst = max(worst, r.distance / r.bound_value)
    ok = bad_main == 0 and bad_classic == 0 and errors == 0 and t["s"] < 30
    record(2, ok, f"400 pairs, {bad_main} main / {bad_classic} classic violations, {errors} errors, max d/bound {worst:.4f}, {t['s']:.1f}s < 30s")
    assert ok


def test_c03_sharpness_trend():
    with timer() as t:
        rows = sharpness_sweep(sorted(SWEEP_BASELINE))
        oracle_ok = True
        rel = []
        for r in rows:
            x, y = sweep_pair(r.n)
            v = grid_oracle(comb_domain(r.n), x, y, 2.0**-10)
            rel.append((v - r.distance) / r.distance)
            oracle_ok &= r.distance - TOL <= v <= 1.02 * r.distance
    drift = max(abs(r.ratio - SWEEP_BASELINE[r.n]) for r in rows)
    ok = ratios_nondecreasing(rows) and all(r.ratio <= 1 for r in rows) and drift <= 1e-6 and oracle_ok and t["s"] < 120
    ratios = ", ".join(f"{r.n}:{r.ratio:.6f}" for r in rows)
    record(3, ok, f"ratios {ratios}; baseline drift {drift:.1e}; oracle 2^-10 excess max {max(rel):.2%}; {t['s']:.1f}s < 120s")
    assert ok


ORACLE_DOMAINS = [("square+slit", square_slit), ("hole", square_hole), ("two-slits", two_slits), ("comb4", lambda: comb_domain(4))]


def test_c04_oracle_agreement():
    dominated = monotone = close = True
    unreachable = 0
    worst = 0.0
    with timer() as t:
        for k, (_, make) in enumerate(ORACLE_DOMAINS):
            dom = make()
            for x, y in random_pairs(dom, 5, 40 + k):
                exact, _ = inner_distance(dom, x, y)
                vals = []
                for e in (6, 8, 10):
                    try:
                        vals.append(grid_oracle(dom, x, y, 2.0**-e))
                    except Unreachable:
                        # no lattice path at this spacing: the bound is +inf
                        vals.append(math.inf)
                        unreachable += 1
                dominated &= all(v >= exact - TOL for v in vals)
                monotone &= vals[0] + TOL >= vals[1] and vals[1] + TOL >= vals[2]
                close &= vals[2] <= 1.02 * exact
                worst = max(worst, (vals[2] - exact) / exact)
    ok = dominated and monotone and close and t["s"] < 120
    record(4, ok, f"20 cases: dominance {dominated}, monotone {monotone}, max excess at 2^-10 {worst:.3%} (<= 2%), {unreachable} unreachable coarse grids, {t['s']:.1f}s < 120s")
    assert ok


def test_c05_hull_bound():
    rng = np.random.default_rng(5)
    with timer() as t:
        worst = max(hull_double_length_check(random_polyline(rng))[1] for _ in range(1000))
        h = 0.01
        _, v_ratio = hull_double_length_check(ConnectedSet((((-1, h), (0, 0)), ((0, 0), (1, h)))))
    ok = worst <= 2 + TOL and v_ratio > 1.98 and t["s"] < 10
    record(5, ok, f"1000 polylines, max hull/H1 {worst:.6f} <= 2; V-shape h=0.01 ratio {v_ratio:.6f} > 1.98; {t['s']:.1f}s < 10s")
    assert ok


def test_c06_painleve_cover():
    rng = np.random.default_rng(6)
    failures = 0
    slack = math.inf
    with timer() as t:
        for _ in range(200):
            K = random_polyline(rng)
            for eps in (0.05, 0.2):
                cert = painleve_cover(K, 0.1, eps)
                failures += not (cert.contains_K and cert.sum_boundary <= 2 * K.h1 + eps)
                slack = min(slack, 2 * K.h1 + eps - cert.sum_boundary)
    ok = failures == 0 and t["s"] < 30
    record(6, ok, f"400 certificates, {failures} failures, min slack {slack:.2e}, {t['s']:.1f}s < 30s")
    assert ok


def test_c07_fractal():
    rng = np.random.default_rng(7)
    with timer() as t:
        levels = [fractal_level(k) for k in range(1, 6)]
        stats = [fractal_stats(L) for L in levels]
        counts = [s.count for s in stats]
        sums_ok = all(abs(s.diameter_sum - 2) <= 1e-12 for s in stats)
        nested = all(nesting_ok(a, b) for a, b in zip(levels, levels[1:]))
        disjoint = all(s.min_gap > 0 for s in stats[1:])
        scale = all(
            abs(stats[k - 1].min_gap - sibling_gap(k, level_radius(k - 1))) <= 1e-9 * level_radius(k - 1)
            for k in range(2, 6)
        )
        gaps = all(sibling_gap_check(k0)[2] for k0 in range(2, 11))
        probes = 0
        probe_ok = True
        for k0 in (3, 4):
            n = 2**k0
            for start in range(n):
                for size in range(3, n + 1):
                    probe_ok &= hull_lower_probe(k0, [(start + i) % n + 1 for i in range(size)]).satisfied
                    probes += 1
            for _ in range(100):
                size = int(rng.integers(3, n + 1))
                probe_ok &= hull_lower_probe(k0, list(rng.choice(np.arange(1, n + 1), size, replace=False))).satisfied
                probes += 1
    ok = counts == [1, 4, 32, 512, 16384] and sums_ok and nested and disjoint and scale and gaps and probe_ok and t["s"] < 60
    record(7, ok, f"counts {counts}, diameter sums 2, nesting {nested}, disjoint {disjoint}, gap scale {scale}, gap k0=2..10 {gaps}, {probes} hull probes {probe_ok}, {t['s']:.1f}s < 60s")
    assert ok


def test_c08_metric_properties():
    domains = [square_slit(), comb_domain(4), mixed(), three_slits()]
    sym = tri = lower = True
    with timer() as t:
        for k, dom in enumerate(domains):
            rng = np.random.default_rng(80 + k)
            pts = [p for pr in random_pairs(dom, 60, 80 + k) for p in pr]
            for _ in range(200):
                x, y, z = (pts[i] for i in rng.choice(len(pts), 3, replace=False))
                dxy = inner_distance(dom, x, y)[0]
                sym &= abs(dxy - inner_distance(dom, y, x)[0]) <= TOL
                tri &= inner_distance(dom, x, z)[0] <= dxy + inner_distance(dom, y, z)[0] + TOL
                lower &= dxy >= dist(x, y) - TOL
        exact = True
        rng = np.random.default_rng(88)
        cases = [
            (PolygonalDomain(points=[(0.5, 0.5), (0.2, 0.7), (1, 1)]), ((0.0, 0.0), (1.5, 1.5))),
            (PolygonalDomain(SQUARE, points=[(0.5, 0.5), (0.25, 0.25)]), ((0.1, 0.1), (0.9, 0.9))),
        ]
        for dom, through in cases:
            for x, y in random_pairs(dom, 100, int(rng.integers(1 << 30))):
                exact &= inner_distance(dom, x, y)[0] == dist(x, y)
            # the straight segment passes over the obstacle points
            exact &= inner_distance(dom, *through)[0] == dist(*through)
    ok = sym and tri and lower and exact and t["s"] < 60
    record(8, ok, f"800 triples: symmetry {sym}, triangle {tri}, d >= |x-y| {lower}; point obstacles exact {exact}; {t['s']:.1f}s < 60s")
    assert ok


def test_c09_detour():
    rng = np.random.default_rng(9)
    done = skipped = bad_sum = bad_half = 0
    with timer() as t:
        while done < 500:
            W = random_star_polygon(rng)
            x, y = interior_point(rng, W), interior_point(rng, W)
            if x == y:
                continue
            try:
                det = boundary_detour(W, x, y)
            except DegenerateConfiguration:
                skipped += 1
                continue
            l6, l7 = det.lengths
            bad_sum += not l6 + l7 <= det.perimeter + TOL
            bad_half += not min(l6, l7) <= det.perimeter / 2 + TOL
            done += 1
    ok = bad_sum == 0 and bad_half == 0 and t["s"] < 30
    record(9, ok, f"500 polygons ({skipped} degenerate resampled): {bad_sum} sum / {bad_half} half violations, {t['s']:.1f}s < 30s")
    assert ok


def _cli(argv):
    out = stdio.StringIO()
    return main(argv, out), out.getvalue()


def test_c10_cli_contract(tmp_path, monkeypatch):
    docs = [io.serialize_domain(d) for d in (slit_plane(), square_slit(), mixed(), comb_domain(5))]
    round_trip = all(io.serialize_domain(io.parse_domain(doc)) == doc for doc in docs)

    slit = tmp_path / "slit.json"
    slit.write_text(docs[0])
    bad = tmp_path / "bad.json"
    bad.write_text('{"outer": [[0, 0], [1, 0]')
    seg = tmp_path / "seg.json"
    seg.write_text("[[[0, 0], [1, 0]]]")
    codes = {
        "ok": _cli(["distance", str(slit), "-1,0", "1,0"])[0],
        "invalid json": _cli(["distance", str(bad), "0,0", "1,1"])[0],
        "invalid n": _cli(["comb", "--n-list", "1"])[0],
    }
    import innerdist.painleve as pl

    fat = pl.inflate
    with monkeypatch.context() as m:
        m.setattr(pl, "inflate", lambda hull, delta, resolution=256: fat(hull, 1.0, resolution))
        codes["failed check"] = _cli(["painleve", str(seg), "--clearance", "0.5", "--epsilon", "0.1"])[0]
    exit_ok = codes == {"ok": 0, "invalid json": 2, "invalid n": 2, "failed check": 1}

    comb = tmp_path / "comb5.json"
    comb.write_text(docs[3])
    cmd = [sys.executable, "-m", "innerdist.cli", "verify", str(comb), "--random", "25", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    repro = a.returncode == 0 and a.stdout == b.stdout and len(a.stdout.splitlines()) == 26
    ok = round_trip and exit_ok and repro
    record(10, ok, f"round trip byte-identical {round_trip}; exit codes {codes}; seeded verify reproducible {repro}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
