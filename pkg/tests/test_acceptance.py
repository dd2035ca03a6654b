"""Acceptance suite: one test and one printed pass/fail line per criterion.

Heavy inputs are shared through module-scoped fixtures; the whole file is
sized to finish in well under half an hour on a laptop.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import finite_random_set
from ordertess import (angles, counterexample, distributions, events,
                       pointsets, tilings)

PI = math.pi
SLACK = 1e-12


def report(num, label, ok):
    print(f"criterion {num:>2} ({label}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} failed: {label}"


# ---------------------------------------------------------------------------
# shared inputs

@pytest.fixture(scope="module")
def ncl41():
    ws = pointsets.non_cocircular_lattice(copies=41, seed=0)
    return events.enumerate_events(ws, depth_cap=29)


@pytest.fixture(scope="module")
def rp50():
    ws = pointsets.random_periodic(n0=50, copies=5, seed=0)
    return events.enumerate_events(ws, depth_cap=29)


@pytest.fixture(scope="module")
def zsq41():
    ws = pointsets.integer_lattice(copies=41)
    return events.enumerate_events(ws, depth_cap=29)


@pytest.fixture(scope="module")
def poisson400():
    ws = pointsets.poisson_torus(rho=400.0, copies=3, seed=0)
    keep = {k + d for k in (2, 6, 15, 30) for d in (-3, -2, -1)}
    return events.enumerate_events(ws, depth_cap=29, keep_depths=keep)


# ---------------------------------------------------------------------------

def test_criterion_01_monotonic_extremes_generic(ncl41, rp50):
    ok = True
    for es in (ncl41, rp50):
        rep = angles.monotonicity_report(es, range(2, 31), slack=SLACK)
        ok = ok and rep.generic and rep.passed
    report(1, "generic monotonicity k=2..30", ok)


def test_criterion_02_monotonic_extremes_square_lattice(zsq41):
    rep = angles.monotonicity_report(zsq41, range(2, 31), slack=SLACK)
    ok = (not rep.generic) and rep.passed
    ok = ok and set(rep.checks) == {"alpha(Bri) non-increasing",
                                    "omega(Igl) non-decreasing"}
    m5 = min(angles.delaunay_tile_angles(zsq41, 5))
    m6 = min(angles.delaunay_tile_angles(zsq41, 6))
    ok = ok and m5 < m6 - 1e-9
    report(2, "square-lattice monotonicity + order-5 dip", ok)


def test_criterion_03_degree_facts_square_lattice(zsq41):
    half = Fraction(41, 2)
    key = (half, half)
    ok = True
    for k in range(5, 12):
        vt = tilings.voronoi_tessellation(zsq41, k)
        idx = {(p.x, p.y): i for i, p in enumerate(vt.vertices)}
        ok = ok and vt.vertex_degree.get(idx.get(key)) == 8
    bt = tilings.brillouin_tessellation(zsq41, 6)
    idx = {(p.x, p.y): i for i, p in enumerate(bt.vertices)}
    ok = ok and bt.vertex_degree.get(idx.get(key)) == 16
    ev = next(e for e in zsq41.events
              if (e.circle.center.x, e.circle.center.y) == key
              and e.circle.r2 == Fraction(5, 2))
    ok = ok and ev.depth_p == 4 and len(ev.on) == 8
    report(3, "degree-8 Voronoi / degree-16 Brillouin vertices", ok)


def test_criterion_04_finite_triangle_barycenter():
    ws = pointsets.finite_example_triangle_barycenter()
    es = events.enumerate_events(ws, depth_cap=1)
    t = angles.depth_tables(es, 1)
    ok = (abs(t.alpha[0] - PI / 6) < 1e-6
          and abs(t.alpha[1] - PI / 3) < 1e-6
          and t.alpha[0] < t.alpha[1])
    report(4, "finite-set alpha_0 < alpha_1 (pi/6 vs pi/3)", ok)


def test_criterion_05_depth_table_inequalities():
    inputs = []
    for seed in range(7):
        inputs.append(pointsets.non_cocircular_lattice(
            copies=15, seed=seed, scan_depth=6))
    for seed in range(7):
        inputs.append(pointsets.random_periodic(n0=20, copies=5, seed=seed))
    for seed in range(6):
        inputs.append(pointsets.perturbed_lattice(
            copies=11, tau=Fraction(1, 8), seed=seed))
    ok = True
    for ws in inputs:
        # grow the analysis region by one cell: the depth-(l+1) witness for
        # a depth-l minimum can sit slightly outside the inner window
        iw = ws.inner_window
        region = pointsets.Rect(iw.x0 - 1, iw.y0 - 1, iw.x1 + 1, iw.y1 + 1)
        es = events.enumerate_events(ws, depth_cap=6, center_region=region)
        t = angles.depth_tables(es, 6)
        for l in range(7):
            ok = ok and t.beta[l] >= t.alpha[l] - SLACK
            if l < 6:
                ok = ok and t.alpha[l] >= t.alpha[l + 1] - SLACK
    report(5, "beta_l >= alpha_l >= alpha_{l+1} over 20 seeds", ok)


def test_criterion_06_duality():
    ok = True
    total_checked = 0
    for seed in range(5):
        ws = pointsets.non_cocircular_lattice(copies=15, seed=seed,
                                              scan_depth=5)
        es = events.enumerate_events(ws, depth_cap=5)
        for k in (1, 2, 3):
            r1 = tilings.check_orthogonal_dual(
                es, tilings.delaunay_mosaic(es, k),
                tilings.voronoi_tessellation(es, k))
            r2 = tilings.check_orthogonal_dual(
                es, tilings.iglesias_mosaic(es, k),
                tilings.brillouin_tessellation(es, k))
            ok = ok and r1.ok and r2.ok
            total_checked += r1.checked + r2.checked
    ok = ok and total_checked > 0
    report(6, "orthogonal duality, 5 seeds x k=1..3", ok)


def _tile_keys(t):
    return {frozenset((t.vertices[i].x, t.vertices[i].y) for i in tl.cycle)
            for tl in t.tiles}


def test_criterion_07_oracle_equivalence():
    from itertools import combinations

    ws = finite_random_set(30, seed=0)
    es = events.enumerate_events(ws, depth_cap=3)
    ok = True
    for k in (1, 2, 3):
        mosaic = tilings.delaunay_mosaic(es, k)
        oracle = tilings.lifted_hull_oracle(
            [tilings.aurenhammer_site(c) for c in combinations(ws.points, k)])
        ok = ok and _tile_keys(mosaic) == _tile_keys(oracle)
        mosaic = tilings.iglesias_mosaic(es, k)
        oracle = tilings.lifted_hull_oracle(
            [tilings.iglesias_site(c, b)
             for c in combinations(ws.points, k) for b in c])
        ok = ok and _tile_keys(mosaic) == _tile_keys(oracle)
    report(7, "lifted-hull oracle equality, k=1..3", ok)


def test_criterion_08_hexagon_geometry():
    ws = pointsets.non_cocircular_lattice(copies=15, seed=0, scan_depth=5)
    es = events.enumerate_events(ws, depth_cap=5)
    pts = ws.points
    ok = True
    for k in (2, 3, 4):
        t = tilings.iglesias_mosaic(es, k)
        mids = [tl for tl in t.tiles if tl.age == tilings.MID]
        ok = ok and bool(mids)
        for tl in mids:
            c = [t.vertices[i] for i in tl.cycle]
            ok = ok and len(c) == 6
            sums = {(c[i].x + c[i + 3].x, c[i].y + c[i + 3].y)
                    for i in range(3)}
            ok = ok and len(sums) == 1
    # depth-0 constructions: order-2 hexagon centered at the triangle
    # centroid, order-3 Old triangle scaled by exactly -1/5 about it
    t2 = tilings.iglesias_mosaic(es, 2)
    t3 = tilings.iglesias_mosaic(es, 3)
    checked = 0
    for tl in t2.tiles:
        if tl.age != tilings.MID or es.events[tl.event_ref].depth_p != 0:
            continue
        ev = es.events[tl.event_ref]
        gx = sum(pts[i].x for i in ev.on) / 3
        gy = sum(pts[i].y for i in ev.on) / 3
        c = [t2.vertices[i] for i in tl.cycle]
        ok = ok and all(c[i].x + c[i + 3].x == 2 * gx
                        and c[i].y + c[i + 3].y == 2 * gy for i in range(3))
        checked += 1
    for tl in t3.tiles:
        if tl.age != tilings.OLD or es.events[tl.event_ref].depth_p != 0:
            continue
        ev = es.events[tl.event_ref]
        gx = sum(pts[i].x for i in ev.on) / 3
        gy = sum(pts[i].y for i in ev.on) / 3
        for vi, z in zip(tl.cycle, ev.on):
            v = t3.vertices[vi]
            ok = ok and v.x == gx - (pts[z].x - gx) / 5
            ok = ok and v.y == gy - (pts[z].y - gy) / 5
        checked += 1
    ok = ok and checked > 0
    report(8, "central symmetry + depth-0 hexagon constructions", ok)


def test_criterion_09_brillouin_vertex_sums(ncl41, zsq41):
    worst = 0.0
    for es in (ncl41, zsq41):
        for ev in es.events:
            p, m = ev.depth_p, len(ev.on)
            for k in range(p + 1, p + m + 1):
                s = sum(v for v, _ in angles.brillouin_vertex_angles(es, ev, k))
                worst = max(worst, abs(s - 2 * PI))
    ok = worst < 1e-9
    report(9, f"vertex angle sums 2*pi (worst dev {worst:.2e})", ok)


def test_criterion_10_miles_distributions(poisson400):
    ok = True
    for kind in (distributions.MILES_F, distributions.MILES_G,
                 distributions.MILES_H):
        ok = ok and abs(distributions.simpson_integral(kind) - 1.0) < 1e-9
    for t in np.linspace(0.0, PI, 4001):
        ok = ok and distributions.h_second_derivative(float(t)) <= SLACK
    eps = 1e-4
    for t in np.linspace(0.1, PI - 0.1, 31):
        fd = (distributions.miles_density(distributions.MILES_H, t + eps)
              - 2 * distributions.miles_density(distributions.MILES_H, t)
              + distributions.miles_density(distributions.MILES_H, t - eps)
              ) / (eps * eps)
        ok = ok and abs(distributions.h_second_derivative(float(t)) - fd) < 1e-5
    pairs = (("Del", distributions.MILES_F), ("Vor", distributions.MILES_G),
             ("Bri", distributions.MILES_H))
    for k in (2, 6, 15, 30):
        for structure, kind in pairs:
            samples = angles.structure_angles(poisson400, structure, k)
            hist = distributions.empirical_density([s.value for s in samples])
            l1, _, _ = distributions.fit_report(hist, kind)
            # Brillouin emits each depth-(k-2) angle at two vertices; the
            # duplicate-free count is the matched sample size for the
            # self-consistency threshold
            n_eff = len({(s.event_ref, s.kind, s.value) for s in samples})
            thr = distributions.self_consistency_threshold(kind, n_eff)
            ok = ok and l1 < 1.5 * thr
    report(10, "Miles density shape + empirical fits", ok)


@pytest.fixture(scope="module")
def vertex_density_pool():
    new = []
    old = []
    for seed in range(50):
        ws = pointsets.poisson_torus(rho=400.0, copies=3, seed=seed)
        es = events.enumerate_events(ws, depth_cap=2, keep_depths={1, 2})
        rep = distributions.vertex_density_report(es, 3, 400.0)
        new.append(rep.new_observed)
        old.append(rep.old_observed)
    return np.array(new), np.array(old)


def _within_3se(samples, target):
    mean = samples.mean()
    se = samples.std(ddof=1) / math.sqrt(len(samples))
    return abs(mean - target) <= 3 * se, mean, se


def test_criterion_11_new_vertex_density(vertex_density_pool):
    new, _ = vertex_density_pool
    ok, mean, se = _within_3se(new, 6 * 400.0)
    report(11, f"new Voronoi vertex density (mean {mean:.0f} vs 2400)", ok)


@pytest.mark.xfail(
    strict=True,
    reason="old order-3 Voronoi vertices are depth-1 events, which occur at "
    "exactly 4 rho per unit area on periodic inputs (2(p+1) rho at depth p); "
    "the stated 5 rho target is not what the construction produces")
def test_criterion_11_old_vertex_density(vertex_density_pool):
    _, old = vertex_density_pool
    ok, mean, se = _within_3se(old, 5 * 400.0)
    report(11, f"old Voronoi vertex density (mean {mean:.0f} vs 2000)", ok)


def test_criterion_12_counterexample():
    ok = True
    for k in (6, 10, 20):
        params0 = counterexample.CounterexampleParams(k=k)
        b13, b14, b15 = counterexample.bound_values(params0)
        ok = ok and b13 < b15 < b14
        for seed in range(10):
            params = counterexample.CounterexampleParams(k=k, seed=seed)
            ws = counterexample.build_counterexample(params)
            rep = counterexample.verify_counterexample(ws, params)
            ok = ok and rep.passed
            ok = ok and rep.omega_del_k > rep.omega_del_k1
    report(12, "non-monotone construction k in {6,10,20} x 10 seeds", ok)
