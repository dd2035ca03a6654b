import math
from fractions import Fraction
from itertools import combinations

import pytest

from conftest import finite_random_set
from ordertess import events, pointsets, tilings
from ordertess.errors import (IncompleteCorrespondenceError,
                              NonGenericUnsupportedError)
from ordertess.exactgeom import ExactPoint, orient2d
from ordertess.tilings import (MID, NEW, OLD, aurenhammer_site,
                               brillouin_tessellation, check_orthogonal_dual,
                               delaunay_mosaic, iglesias_mosaic, iglesias_site,
                               lifted_hull_oracle, voronoi_tessellation)


def _ncl_events(depth=5, copies=15, seed=0):
    ws = pointsets.non_cocircular_lattice(copies=copies, seed=seed,
                                          scan_depth=depth)
    return events.enumerate_events(ws, depth_cap=depth)


def _assert_ccw(t):
    for tile in t.tiles:
        c = [t.vertices[i] for i in tile.cycle]
        for i in range(len(c)):
            assert orient2d(c[i], c[(i + 1) % len(c)], c[(i + 2) % len(c)]) == 1


def test_aurenhammer_site_mean():
    B = (ExactPoint.of(0, 0), ExactPoint.of(2, 0), ExactPoint.of(1, 3))
    s = aurenhammer_site(B)
    assert s.position == ExactPoint.of(1, 1)
    assert s.height == Fraction(0 + 4 + 10, 3)


def test_iglesias_site_weighting():
    B = (ExactPoint.of(0, 0), ExactPoint.of(3, 0))
    s = iglesias_site(B, B[0])
    assert s.position == ExactPoint.of(2, 0)
    assert s.height == Fraction(18, 3)
    with pytest.raises(ValueError):
        iglesias_site(B, ExactPoint.of(9, 9))


def test_delaunay_first_order_is_classic():
    es = _ncl_events(depth=2)
    t = delaunay_mosaic(es, 1)
    assert all(tile.age == NEW for tile in t.tiles)
    assert len(t.tiles) == sum(1 for e in es.events if e.depth_p == 0)
    # order-1 vertices are the sites themselves
    site_coords = {(p.x, p.y) for p in es.source.points}
    assert all((v.x, v.y) in site_coords for v in t.vertices)
    _assert_ccw(t)


def test_delaunay_tile_ages():
    es = _ncl_events(depth=3)
    t = delaunay_mosaic(es, 2)
    new = sum(1 for tile in t.tiles if tile.age == NEW)
    old = sum(1 for tile in t.tiles if tile.age == OLD)
    assert new == sum(1 for e in es.events if e.depth_p == 1)
    assert old == sum(1 for e in es.events if e.depth_p == 0)
    _assert_ccw(t)


def test_iglesias_mid_hexagons_centrally_symmetric():
    es = _ncl_events(depth=4)
    for k in (2, 3):
        t = iglesias_mosaic(es, k)
        mids = [tile for tile in t.tiles if tile.age == MID]
        assert mids
        for tile in mids:
            c = [t.vertices[i] for i in tile.cycle]
            assert len(c) == 6
            sums = {(c[i].x + c[i + 3].x, c[i].y + c[i + 3].y)
                    for i in range(3)}
            assert len(sums) == 1
        _assert_ccw(t)


def test_iglesias_order3_old_is_reflected_fifth_scale():
    """The Old tile of a depth-0 event in the order-3 mosaic is the on-site
    triangle scaled by exactly -1/5 about its centroid."""
    es = _ncl_events(depth=3)
    t = iglesias_mosaic(es, 3)
    pts = es.source.points
    checked = 0
    for tile in t.tiles:
        if tile.age != OLD:
            continue
        ev = es.events[tile.event_ref]
        if ev.depth_p != 0:
            continue
        gx = sum(pts[i].x for i in ev.on) / 3
        gy = sum(pts[i].y for i in ev.on) / 3
        for vi, z in zip(tile.cycle, ev.on):
            v = t.vertices[vi]
            assert v.x == gx - (pts[z].x - gx) / 5
            assert v.y == gy - (pts[z].y - gy) / 5
        checked += 1
    assert checked > 0


def test_iglesias_order1_equals_delaunay():
    es = _ncl_events(depth=2)
    d = delaunay_mosaic(es, 1)
    g = iglesias_mosaic(es, 1)
    dk = {frozenset((d.vertices[i].x, d.vertices[i].y) for i in t.cycle)
          for t in d.tiles}
    gk = {frozenset((g.vertices[i].x, g.vertices[i].y) for i in t.cycle)
          for t in g.tiles}
    assert dk == gk


def test_voronoi_vertices_and_duality():
    es = _ncl_events(depth=4)
    for k in (1, 2, 3):
        dm = delaunay_mosaic(es, k)
        vt = voronoi_tessellation(es, k)
        rep = check_orthogonal_dual(es, dm, vt)
        assert rep.ok
        assert rep.checked > 0
        assert all(d == 3 for d in vt.vertex_degree.values())


def test_brillouin_duality():
    es = _ncl_events(depth=4)
    for k in (1, 2, 3):
        im = iglesias_mosaic(es, k)
        bt = brillouin_tessellation(es, k)
        rep = check_orthogonal_dual(es, im, bt)
        assert rep.ok
        assert rep.checked > 0


def test_brillouin_vertex_degrees_generic():
    es = _ncl_events(depth=4)
    bt = brillouin_tessellation(es, 3)
    for i, ref in bt.vertex_event.items():
        p = es.events[ref].depth_p
        want = 3 if 3 in (p + 1, p + 3) else 6
        assert bt.vertex_degree[i] == want


def test_nongeneric_tilings():
    ws = pointsets.integer_lattice(copies=11)
    es = events.enumerate_events(ws, depth_cap=5)
    with pytest.raises(NonGenericUnsupportedError):
        delaunay_mosaic(es, 2)
    vt = voronoi_tessellation(es, 6)
    assert vt.edges == []
    assert 8 in set(vt.vertex_degree.values())
    bt = brillouin_tessellation(es, 6)
    assert 16 in set(bt.vertex_degree.values())


def test_duality_requires_correspondence():
    es = _ncl_events(depth=4)
    dm = delaunay_mosaic(es, 2)
    wrong = voronoi_tessellation(es, 4)  # vertex depths disjoint from Del_2
    with pytest.raises(IncompleteCorrespondenceError):
        check_orthogonal_dual(es, dm, wrong)


def _tile_keys(t, trusted_only=True):
    return {frozenset((t.vertices[i].x, t.vertices[i].y) for i in tl.cycle)
            for tl in t.tiles if tl.trusted or not trusted_only}


def test_oracle_matches_delaunay_mosaic():
    ws = finite_random_set(18, seed=4)
    es = events.enumerate_events(ws, depth_cap=2)
    for k in (1, 2):
        mosaic = delaunay_mosaic(es, k)
        sites = [aurenhammer_site(c) for c in combinations(ws.points, k)]
        oracle = lifted_hull_oracle(sites)
        assert _tile_keys(mosaic) == _tile_keys(oracle)


def test_oracle_matches_iglesias_mosaic():
    ws = finite_random_set(15, seed=6)
    es = events.enumerate_events(ws, depth_cap=2)
    k = 2
    mosaic = iglesias_mosaic(es, k)
    sites = [iglesias_site(c, b)
             for c in combinations(ws.points, k) for b in c]
    oracle = lifted_hull_oracle(sites)
    assert _tile_keys(mosaic) == _tile_keys(oracle)


def test_json_and_svg_deterministic(tmp_path):
    es = _ncl_events(depth=3)
    t = iglesias_mosaic(es, 2)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    tilings.save_tiling(p1, t)
    tilings.save_tiling(p2, iglesias_mosaic(es, 2))
    assert p1.read_bytes() == p2.read_bytes()
    s1, s2 = tmp_path / "a.svg", tmp_path / "b.svg"
    tilings.save_svg(s1, t, es.source.inner_window)
    tilings.save_svg(s2, t, es.source.inner_window)
    assert s1.read_bytes() == s2.read_bytes()
    body = s1.read_text()
    assert body.startswith("<svg") or "<svg" in body


def test_tiling_json_shape(tmp_path):
    es = _ncl_events(depth=3)
    t = delaunay_mosaic(es, 2)
    d = tilings.tiling_to_json_dict(t)
    assert d["structure"] == "Del"
    assert d["order"] == 2
    assert len(d["vertices"]) == len(t.vertices)
    assert all(len(e) == 2 for e in d["edges"])
