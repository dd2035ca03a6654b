"""Explicit realizations of the four order-k tilings.

Tiles are built per event from closed-form vertex expressions (means of site
subsets), so every vertex is an exact rational point and shared vertices
merge by exact equality.  The weighted-Delaunay route via a 3D lift exists
only as an independent oracle for cross-validation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (IncompleteCorrespondenceError, NonGenericUnsupportedError,
                     OracleInconsistencyError)
from .events import EventSet
from .exactgeom import ExactPoint
from .pointsets import Rect

OLD = "Old"
MID = "Mid"
NEW = "New"


@dataclass(frozen=True, slots=True)
class Tile:
    cycle: tuple          # vertex indices, counterclockwise
    age: str
    event_ref: int
    trusted: bool = True


@dataclass
class Tiling:
    structure: str
    order: int
    vertices: list            # ExactPoint
    edges: list               # sorted index pairs
    tiles: list               # Tile
    vertex_degree: dict = field(default_factory=dict)
    vertex_event: dict = field(default_factory=dict)  # vertex index -> event_ref


@dataclass(frozen=True, slots=True)
class AurenhammerSite:
    position: ExactPoint
    height: Fraction
    weight: Fraction
    generator: tuple


def aurenhammer_site(B) -> AurenhammerSite:
    """Site of the order-k subset B: mean position and mean squared norm."""
    B = tuple(B)
    k = len(B)
    if k == 0:
        raise ValueError("empty subset")
    px = sum(p.x for p in B) / k
    py = sum(p.y for p in B) / k
    h = sum(p.norm2() for p in B) / k
    pos = ExactPoint(Fraction(px), Fraction(py))
    return AurenhammerSite(pos, Fraction(h), pos.norm2() - h, B)


def iglesias_site(B, b) -> AurenhammerSite:
    """Centrally-weighted site: the distinguished member counts once, the
    rest twice, normalized by 2k-1."""
    B = tuple(B)
    if b not in B:
        raise ValueError("distinguished member not in subset")
    k = len(B)
    d = 2 * k - 1
    rest = [p for p in B if p != b]
    px = (b.x + 2 * sum(p.x for p in rest)) / d
    py = (b.y + 2 * sum(p.y for p in rest)) / d
    h = (b.norm2() + 2 * sum(p.norm2() for p in rest)) / d
    pos = ExactPoint(Fraction(px), Fraction(py))
    return AurenhammerSite(pos, Fraction(h), pos.norm2() - h, (B, b))


class _VertexPool:
    """Merges tile vertices by exact coordinates."""

    def __init__(self):
        self.index = {}
        self.points = []

    def add(self, x: Fraction, y: Fraction) -> int:
        key = (x, y)
        i = self.index.get(key)
        if i is None:
            i = len(self.points)
            self.index[key] = i
            self.points.append(ExactPoint(x, y))
        return i


def _edges_of(tiles):
    edges = set()
    for t in tiles:
        c = t.cycle
        for a, b in zip(c, c[1:] + c[:1]):
            edges.add((a, b) if a < b else (b, a))
    return sorted(edges)


def _require_generic(es: EventSet):
    if not es.generic:
        raise NonGenericUnsupportedError(
            "tile construction needs generic events (all |on| == 3)")


def _inside_sum(es: EventSet, ev):
    pts = es.source.points
    ux = sum(pts[i].x for i in ev.inside)
    uy = sum(pts[i].y for i in ev.inside)
    return Fraction(ux), Fraction(uy)


def _trusted(es: EventSet, ev) -> bool:
    if es.source.finite:
        return True
    c, r2 = ev.circle.center, ev.circle.r2
    o = es.source.outer_window
    for gap in (c.x - o.x0, o.x1 - c.x, c.y - o.y0, o.y1 - c.y):
        if gap * gap == r2:
            return False
    return True


def delaunay_mosaic(es: EventSet, k: int) -> Tiling:
    """Order-k Delaunay: one New triangle per depth k-1 event, one Old
    triangle per depth k-2 event (vertex = mean of the k generating sites)."""
    _require_generic(es)
    pts = es.source.points
    pool = _VertexPool()
    tiles = []
    for ref, ev in enumerate(es.events):
        l = ev.depth_p
        ux, uy = None, None
        if l == k - 1:
            ux, uy = _inside_sum(es, ev)
            cyc = tuple(pool.add((ux + pts[i].x) / k, (uy + pts[i].y) / k)
                        for i in ev.on)
            tiles.append(Tile(cyc, NEW, ref, _trusted(es, ev)))
        if l == k - 2:
            ux, uy = _inside_sum(es, ev)
            cyc = []
            for z in ev.on:  # point reflection of the on-triangle keeps ccw
                sx = ux + sum(pts[i].x for i in ev.on if i != z)
                sy = uy + sum(pts[i].y for i in ev.on if i != z)
                cyc.append(pool.add(sx / k, sy / k))
            tiles.append(Tile(tuple(cyc), OLD, ref, _trusted(es, ev)))
    return Tiling("Del", k, pool.points, _edges_of(tiles), tiles)


def iglesias_mosaic(es: EventSet, k: int) -> Tiling:
    """Order-k centrally-weighted mosaic: New and Old triangles plus the Mid
    hexagon, all with closed-form rational vertices."""
    _require_generic(es)
    pts = es.source.points
    pool = _VertexPool()
    tiles = []
    for ref, ev in enumerate(es.events):
        l = ev.depth_p
        tr = None
        if l == k - 1:
            ux, uy = _inside_sum(es, ev)
            d = 2 * l + 1
            cyc = tuple(pool.add((2 * ux + pts[i].x) / d, (2 * uy + pts[i].y) / d)
                        for i in ev.on)
            tiles.append(Tile(cyc, NEW, ref, _trusted(es, ev)))
        if l == k - 2:
            ux, uy = _inside_sum(es, ev)
            d = 2 * l + 3
            a0, a1, a2 = ev.on
            cyc = []
            for x, y in ((a0, a1), (a1, a0), (a1, a2), (a2, a1), (a2, a0), (a0, a2)):
                cyc.append(pool.add((2 * ux + 2 * pts[x].x + pts[y].x) / d,
                                    (2 * uy + 2 * pts[x].y + pts[y].y) / d))
            tiles.append(Tile(tuple(cyc), MID, ref, _trusted(es, ev)))
        if l == k - 3:
            ux, uy = _inside_sum(es, ev)
            d = 2 * l + 5
            sx = 2 * sum(pts[i].x for i in ev.on)
            sy = 2 * sum(pts[i].y for i in ev.on)
            cyc = tuple(pool.add((2 * ux + sx - pts[z].x) / d,
                                 (2 * uy + sy - pts[z].y) / d)
                        for z in ev.on)  # point reflection keeps ccw
            tiles.append(Tile(cyc, OLD, ref, _trusted(es, ev)))
    return Tiling("Igl", k, pool.points, _edges_of(tiles), tiles)


def voronoi_tessellation(es: EventSet, k: int) -> Tiling:
    """Order-k Voronoi vertices (event centers, with degrees); edges from the
    orthogonal dual of the order-k Delaunay on generic input."""
    pool = _VertexPool()
    degree = {}
    vertex_event = {}
    for ref, ev in enumerate(es.events):
        p, m = ev.depth_p, len(ev.on)
        if p + 1 <= k <= p + m - 1:
            i = pool.add(ev.circle.center.x, ev.circle.center.y)
            degree[i] = m
            vertex_event[i] = ref
    edges = []
    if es.generic:
        edges = _dual_edges(es, delaunay_mosaic(es, k), pool)
    return Tiling("Vor", k, pool.points, edges, [], degree, vertex_event)


def brillouin_tessellation(es: EventSet, k: int) -> Tiling:
    """Order-k Brillouin: vertex at each event center with p+1 <= k <= p+|on|,
    degree |on| at the boundary orders and 2|on| strictly between; edges are
    the union of the order k-1 and order k Voronoi edge sets."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pool = _VertexPool()
    degree = {}
    vertex_event = {}
    for ref, ev in enumerate(es.events):
        p, m = ev.depth_p, len(ev.on)
        if p + 1 <= k <= p + m:
            i = pool.add(ev.circle.center.x, ev.circle.center.y)
            degree[i] = m if k in (p + 1, p + m) else 2 * m
            vertex_event[i] = ref
    edges = set()
    if es.generic:
        for kk in ((k,) if k == 1 else (k - 1, k)):
            edges.update(_dual_edges(es, delaunay_mosaic(es, kk), pool))
    return Tiling("Bri", k, pool.points, sorted(edges), [], degree, vertex_event)


def _dual_edges(es: EventSet, mosaic: Tiling, pool: _VertexPool):
    """Edges connecting centers of events whose tiles share a mosaic edge."""
    side = {}
    for t in mosaic.tiles:
        c = t.cycle
        for a, b in zip(c, c[1:] + c[:1]):
            key = (a, b) if a < b else (b, a)
            side.setdefault(key, []).append(t.event_ref)
    edges = set()
    for refs in side.values():
        if len(refs) != 2:
            continue
        c1 = es.events[refs[0]].circle.center
        c2 = es.events[refs[1]].circle.center
        i = pool.add(c1.x, c1.y)
        j = pool.add(c2.x, c2.y)
        if i != j:
            edges.add((i, j) if i < j else (j, i))
    return sorted(edges)


# ---------------------------------------------------------------------------
# Orthogonal duality check

@dataclass
class DualReport:
    checked: int
    violations: list          # (edge, reason)
    excluded_boundary: int

    @property
    def ok(self) -> bool:
        return not self.violations


def check_orthogonal_dual(es: EventSet, mosaic: Tiling, dual: Tiling) -> DualReport:
    """Verifies Def.-2.1-style duality between a mosaic (Del or Igl) and its
    candidate dual (Vor or Bri) at the same order.

    Every interior mosaic edge (shared by exactly two tiles) must be exactly
    orthogonal to the segment joining the centers of the two generating
    events, and that segment must point from the left tile's center to the
    right tile's center.  Boundary edges are excluded and counted.
    """
    side = {}
    for t in mosaic.tiles:
        c = t.cycle
        for a, b in zip(c, c[1:] + c[:1]):
            key = (a, b) if a < b else (b, a)
            side.setdefault(key, []).append((t.event_ref, (a, b)))
    dual_centers = {dual.vertex_event[i]: dual.vertices[i]
                    for i in dual.vertex_event}
    checked = 0
    excluded = 0
    violations = []
    for key, occ in side.items():
        if len(occ) != 2:
            excluded += 1
            continue
        (ref1, d1), (ref2, d2) = occ
        if ref1 not in dual_centers or ref2 not in dual_centers:
            excluded += 1
            continue
        # orient the edge so tile 1 traverses it forward (lies on its left)
        a, b = d1
        if d1 == d2:
            violations.append((key, "inconsistent tile orientations"))
            continue
        p = mosaic.vertices[a]
        q = mosaic.vertices[b]
        ex, ey = q.x - p.x, q.y - p.y
        c1 = dual_centers[ref1]
        c2 = dual_centers[ref2]
        wx, wy = c2.x - c1.x, c2.y - c1.y
        checked += 1
        if ex * wx + ey * wy != 0:
            violations.append((key, "not orthogonal"))
        elif ex * wy - ey * wx >= 0:
            violations.append((key, "orientation reversed"))
    if checked == 0:
        raise IncompleteCorrespondenceError(
            "no interior edge admits a dual correspondence")
    return DualReport(checked, violations, excluded)


# ---------------------------------------------------------------------------
# Lifted-hull oracle

def lifted_hull_oracle(sites, window: Rect | None = None) -> Tiling:
    """Weighted Delaunay of the sites via the lower hull of the 3D lift
    (x, y, height), independently of the closed-form tile construction.

    Qhull proposes candidate lower facets from float coordinates; each
    proposed supporting plane is then verified exactly: a conservative float
    bound certifies clearly-above sites, every borderline site is tested in
    exact rational arithmetic.  Coplanar proposals merge into one polygonal
    tile keyed by the exact plane.  A proposal that fails verification means
    the float hull was inconsistent with the exact lift, which is an error,
    never silently repaired.
    """
    from scipy.spatial import ConvexHull

    sites = list(sites)
    if len(sites) < 3:
        raise ValueError("need at least 3 sites")
    P = np.array([[float(s.position.x), float(s.position.y), float(s.height)]
                  for s in sites])
    hull = ConvexHull(P, qhull_options="Qt")
    scale = float(np.abs(P).max()) + 1.0
    tol = 1e-9 * scale * scale

    planes = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        if eq[2] >= -1e-12:      # keep facets whose outward normal points down
            continue
        plane = _exact_plane(sites, simplex)
        if plane is None:
            continue
        planes.setdefault(plane, simplex)

    heights = P[:, 2]
    tiles = []
    pool = _VertexPool()
    for plane in planes:
        A, B, C = plane
        resid = heights - (float(A) * P[:, 0] + float(B) * P[:, 1] + float(C))
        borderline = np.nonzero(resid < tol)[0]
        on_plane = []
        for idx in borderline:
            s = sites[idx]
            val = s.height - (A * s.position.x + B * s.position.y + C)
            if val < 0:
                raise OracleInconsistencyError(
                    "proposed facet has a lifted site strictly below it")
            if val == 0:
                on_plane.append(idx)
        if len(on_plane) < 3:
            raise OracleInconsistencyError("facet lost its defining sites")
        cyc = _convex_ccw(sites, on_plane, pool)
        if cyc is not None:
            tiles.append(Tile(cyc, "Hull", -1, _tile_in_window(pool, cyc, window)))
    return Tiling("Hull", 0, pool.points, _edges_of(tiles), tiles)


def _exact_plane(sites, simplex):
    """(A, B, C) with z = A x + B y + C through three lifted sites, or None
    when their xy projections are collinear (a vertical side wall)."""
    (p1, p2, p3) = (sites[i] for i in simplex)
    x1, y1, h1 = p1.position.x, p1.position.y, p1.height
    x2, y2, h2 = p2.position.x, p2.position.y, p2.height
    x3, y3, h3 = p3.position.x, p3.position.y, p3.height
    det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
    if det == 0:
        return None
    A = ((h2 - h1) * (y3 - y1) - (y2 - y1) * (h3 - h1)) / det
    B = ((x2 - x1) * (h3 - h1) - (h2 - h1) * (x3 - x1)) / det
    C = h1 - A * x1 - B * y1
    return (A, B, C)


def _convex_ccw(sites, idxs, pool):
    """Indices into the pool of the convex ccw cycle of coplanar sites,
    dropping exact duplicates; None when fewer than 3 distinct points."""
    seen = {}
    for i in idxs:
        seen[(sites[i].position.x, sites[i].position.y)] = i
    if len(seen) < 3:
        return None
    pts = list(seen.keys())
    cx = float(sum(p[0] for p in pts)) / len(pts)
    cy = float(sum(p[1] for p in pts)) / len(pts)
    pts.sort(key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))
    return tuple(pool.add(x, y) for x, y in pts)


def _tile_in_window(pool, cyc, window):
    if window is None:
        return True
    return all(window.contains_closed(pool.points[i]) for i in cyc)


# ---------------------------------------------------------------------------
# Export

def tiling_to_json_dict(t: Tiling) -> dict:
    def rat(f):
        return [f.numerator, f.denominator]

    return {
        "structure": t.structure,
        "order": t.order,
        "vertices": [[rat(p.x), rat(p.y)] for p in t.vertices],
        "edges": [list(e) for e in t.edges],
        "tiles": [{"cycle": list(tl.cycle), "age": tl.age,
                   "event_ref": tl.event_ref, "trusted": tl.trusted}
                  for tl in t.tiles],
        "vertex_degree": {str(i): d for i, d in sorted(t.vertex_degree.items())},
    }


def save_tiling(path, t: Tiling) -> None:
    with open(path, "w") as fh:
        json.dump(tiling_to_json_dict(t), fh, indent=1, sort_keys=True)
        fh.write("\n")


_AGE_FILL = {OLD: "#c6dbef", MID: "#fdd0a2", NEW: "#c7e9c0"}
_STRUCT_STROKE = {"Del": "#08519c", "Vor": "#a63603", "Bri": "#54278f",
                  "Igl": "#006d2c", "Hull": "#525252"}


def tiling_svg(t: Tiling, viewport: Rect, size: int = 640) -> str:
    """Deterministic standalone SVG of the tiling clipped to the viewport."""
    x0, y0, x1, y1 = viewport.as_floats()
    w = x1 - x0
    h = y1 - y0
    s = size / max(w, h)

    def tx(p):
        return (float(p.x) - x0) * s, (y1 - float(p.y)) * s

    stroke = _STRUCT_STROKE.get(t.structure, "#000000")
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * s:.1f}" '
             f'height="{h * s:.1f}" viewBox="0 0 {w * s:.1f} {h * s:.1f}">']
    for tl in t.tiles:
        pts = " ".join(f"{tx(t.vertices[i])[0]:.3f},{tx(t.vertices[i])[1]:.3f}"
                       for i in tl.cycle)
        fill = _AGE_FILL.get(tl.age, "none")
        parts.append(f'<polygon points="{pts}" fill="{fill}" '
                     f'stroke="{stroke}" stroke-width="1"/>')
    if not t.tiles:
        for a, b in t.edges:
            xa, ya = tx(t.vertices[a])
            xb, yb = tx(t.vertices[b])
            parts.append(f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" '
                         f'y2="{yb:.3f}" stroke="{stroke}" stroke-width="1"/>')
        for i in sorted(t.vertex_degree):
            x, y = tx(t.vertices[i])
            parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2" fill="{stroke}"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def save_svg(path, t: Tiling, viewport: Rect, size: int = 640) -> None:
    with open(path, "w") as fh:
        fh.write(tiling_svg(t, viewport, size))
        fh.write("\n")
