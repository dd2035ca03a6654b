"""Circle-event enumeration: every circle through >= 3 sites, with exact depth.

An event is a circle through at least three sites whose center lies in the
trusted region and whose closed disk fits the outer window, together with the
exact lists of sites on and strictly inside it.  Events are the single source
of truth for all angle and tiling computations.

Enumeration strategy: a rigorous per-depth radius bound (grid + kth-nearest-
neighbor argument) limits the search to triples of nearby sites; a float
prefilter with generous slack proposes candidate triples; every survivor is
verified with exact integer arithmetic on the common-denominator scaling of
the site coordinates.  The prefilter can only over-propose, never drop a true
event, so exactness is preserved end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.spatial import cKDTree

from ._kernels import prefilter_triples
from .errors import DiskOutsideWindowError, WindowTooSmallError
from .exactgeom import ExactCircle, ExactPoint, Side, circumcircle, side_of
from .pointsets import Rect, WindowedSet

_PAD = 1e-9


@dataclass(frozen=True, slots=True)
class CircleEvent:
    """One circle through >= 3 sites with exact incidence data.

    on: site indices on the circle, counterclockwise, starting at the
    smallest polar angle around the center.  depth_p == len(inside).
    """

    circle: ExactCircle
    on: tuple
    depth_p: int
    inside: tuple
    fx: float  # float center/radius, for rendering and spatial queries only
    fy: float
    fr: float


class EventSet:
    def __init__(self, events, source: WindowedSet, depth_cap: int,
                 k_max_usable: int, kept_depths=None):
        self.events: list[CircleEvent] = events
        self.source = source
        self.depth_cap = depth_cap
        self.k_max_usable = k_max_usable
        self.kept_depths = None if kept_depths is None else frozenset(kept_depths)

    def __len__(self):
        return len(self.events)

    @property
    def generic(self) -> bool:
        return all(len(e.on) == 3 for e in self.events)

    def by_depth(self, depth: int):
        return [e for e in self.events if e.depth_p == depth]


def radius_bounds(ws: WindowedSet, depth_cap: int, region: Rect) -> np.ndarray:
    """R[l] such that any circle with center in region and <= l enclosed sites
    has radius <= R[l], for l = 0..depth_cap.

    Argument: for any center x, a circle enclosing at most l sites has radius
    at most the distance from x to its (l+1)-st nearest site, and that
    distance is bounded by the same quantity at the nearest grid center plus
    half the grid cell diagonal.
    """
    if len(ws.points) < depth_cap + 2:
        raise WindowTooSmallError(depth_cap, max(len(ws.points) - 2, 0))
    x0, y0, x1, y1 = region.as_floats()
    w = max(x1 - x0, y1 - y0, 1e-9)
    s = w / 32.0
    gx = np.arange(x0, x1 + s, s)
    gy = np.arange(y0, y1 + s, s)
    centers = np.array([(a, b) for a in gx for b in gy])
    tree = cKDTree(ws.float_coords())
    k = depth_cap + 1
    dists, _ = tree.query(centers, k=k)
    dists = dists.reshape(centers.shape[0], k)
    cellpad = s * math.sqrt(2.0) / 2.0
    # a circle with l sites strictly inside has radius <= d_{l+1}(center)
    worst = dists.max(axis=0)
    return worst + cellpad + _PAD * (1.0 + worst)


def max_usable_order(ws: WindowedSet, depth_limit: int = 256,
                     region: Rect | None = None) -> int:
    """Largest k whose needed depths (<= k-1) all fit the outer window."""
    region = region or ws.inner_window
    margin = _window_margin(ws, region)
    depth_limit = min(depth_limit, len(ws.points) - 2)
    bounds = radius_bounds(ws, depth_limit, region)
    usable = int(np.searchsorted(bounds > margin, True)) - 1
    if bounds[-1] <= margin:
        usable = depth_limit
    return usable + 1


def _window_margin(ws: WindowedSet, region: Rect) -> float:
    outer = ws.outer_window
    m = min(region.x0 - outer.x0, outer.x1 - region.x1,
            region.y0 - outer.y0, outer.y1 - region.y1)
    return float(m) - _PAD


def enumerate_events(ws: WindowedSet, depth_cap: int,
                     center_region: Rect | None = None,
                     keep_depths=None) -> EventSet:
    """All distinct events with center in the region and depth <= depth_cap.

    keep_depths optionally drops stored events outside the given depth set
    (the enumeration itself always covers every depth <= depth_cap).
    Raises WindowTooSmallError when some depth <= depth_cap would need disks
    that cannot fit the outer window, reporting the attainable order.
    """
    if depth_cap < 0:
        raise ValueError("depth_cap must be >= 0")
    if not ws.points:
        raise ValueError("empty point set")
    if ws.finite:
        return _enumerate_finite(ws, depth_cap, keep_depths)

    region = center_region or ws.inner_window
    margin = _window_margin(ws, region)
    bounds = radius_bounds(ws, depth_cap, region)
    if bounds[depth_cap] > margin:
        attainable = int(np.searchsorted(bounds > margin, True))
        raise WindowTooSmallError(depth_cap, attainable)
    rmax = float(bounds[depth_cap])

    coords = ws.float_coords()
    px = np.ascontiguousarray(coords[:, 0])
    py = np.ascontiguousarray(coords[:, 1])
    x0, y0, x1, y1 = region.as_floats()
    scale = max(abs(v) for v in ws.outer_window.as_floats()) + 1.0
    slack = 1e-6 * scale

    # sites that can lie on a qualifying circle: within rmax of the region
    near = ((px >= x0 - rmax - slack) & (px <= x1 + rmax + slack)
            & (py >= y0 - rmax - slack) & (py <= y1 + rmax + slack))
    anchors = np.nonzero(near)[0].astype(np.int64)
    if anchors.shape[0] < 3:
        return EventSet([], ws, depth_cap, depth_cap + 1, keep_depths)

    sub = coords[anchors]
    tree_sub = cKDTree(sub)
    pairs = tree_sub.query_pairs(2.0 * rmax * (1.0 + 1e-6) + slack,
                                 output_type="ndarray")
    # CSR neighbor lists: global indices strictly greater than the anchor
    deg = np.zeros(anchors.shape[0], dtype=np.int64)
    gi = anchors[pairs[:, 0]]
    gj = anchors[pairs[:, 1]]
    lo = np.where(gi < gj, pairs[:, 0], pairs[:, 1])
    hi_g = np.where(gi < gj, gj, gi)
    np.add.at(deg, lo, 1)
    indptr = np.zeros(anchors.shape[0] + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbrs = np.empty(pairs.shape[0], dtype=np.int64)
    cursor = indptr[:-1].copy()
    order = np.argsort(lo, kind="stable")
    for idx in order:
        a = lo[idx]
        nbrs[cursor[a]] = hi_g[idx]
        cursor[a] += 1

    ti, tj, tk = prefilter_triples(px, py, anchors, indptr, nbrs, rmax,
                                   (x0, y0, x1, y1),
                                   ws.outer_window.as_floats(), slack)

    return _verify_triples(ws, region, depth_cap, keep_depths, ti, tj, tk,
                           coords, rmax)


def _verify_triples(ws, region, depth_cap, keep_depths, ti, tj, tk, coords, rmax):
    denom, X, Y = ws.scaled()
    ox0, oy0 = ws.outer_window.x0, ws.outer_window.y0
    ox1, oy1 = ws.outer_window.x1, ws.outer_window.y1

    pending = {}  # key -> (cxn, cyn, d, s_on, float cx, cy, r)
    for i, j, k in zip(ti.tolist(), tj.tolist(), tk.tolist()):
        ax = X[i]
        ay = Y[i]
        bx = X[j] - ax
        by = Y[j] - ay
        cx = X[k] - ax
        cy = Y[k] - ay
        d = 2 * (bx * cy - by * cx)
        if d == 0:
            continue
        b2 = bx * bx + by * by
        c2 = cx * cx + cy * cy
        nx = cy * b2 - by * c2
        ny = bx * c2 - cx * b2
        if d < 0:
            d, nx, ny = -d, -nx, -ny
        cxn = ax * d + nx  # center = (cxn, cyn) / (d * denom)
        cyn = ay * d + ny
        dd = d * denom
        # half-open membership in the region, exact
        fx = Fraction(cxn, dd)
        if not region.x0 <= fx < region.x1:
            continue
        fy = Fraction(cyn, dd)
        if not region.y0 <= fy < region.y1:
            continue
        s_on = nx * nx + ny * ny  # squared radius * (d * denom)^2
        key = (fx, fy, Fraction(s_on, dd * dd))
        if key in pending:
            continue
        # closed disk inside the outer window, exact: (center - edge)^2 >= r^2
        r2 = key[2]
        if not (_side_fits(fx - ox0, r2) and _side_fits(ox1 - fx, r2)
                and _side_fits(fy - oy0, r2) and _side_fits(oy1 - fy, r2)):
            continue
        fcx, fcy, fr = _float_circum(coords, i, j, k)
        pending[key] = (cxn, cyn, d, s_on, fcx, fcy, fr)

    if not pending:
        return EventSet([], ws, depth_cap, depth_cap + 1, keep_depths)

    tree = cKDTree(coords)
    keys = list(pending.keys())
    centers = np.array([(v[4], v[5]) for v in pending.values()])
    radii = np.array([v[6] for v in pending.values()])
    query_r = radii * (1.0 + 1e-6) + 1e-4 * (1.0 + radii)
    cand_lists = tree.query_ball_point(centers, query_r)

    keep = None if keep_depths is None else frozenset(keep_depths)
    events = []
    for key, cand in zip(keys, cand_lists):
        cxn, cyn, d, s_on, fcx, fcy, fr = pending[key]
        on = []
        inside = []
        for q in cand:
            sx = d * X[q] - cxn
            sy = d * Y[q] - cyn
            s = sx * sx + sy * sy
            if s < s_on:
                inside.append(q)
            elif s == s_on:
                on.append(q)
        if len(on) < 3:
            continue
        p = len(inside)
        if p > depth_cap:
            continue
        if keep is not None and p not in keep:
            continue
        on_sorted = _ccw_order(coords, on, fcx, fcy)
        circle = ExactCircle(ExactPoint(key[0], key[1]), key[2])
        events.append(CircleEvent(circle, tuple(on_sorted), p,
                                  tuple(sorted(inside)), fcx, fcy, fr))
    events.sort(key=lambda e: (e.fx, e.fy, e.fr))
    return EventSet(events, ws, depth_cap, depth_cap + 1, keep_depths)


def _side_fits(gap: Fraction, r2: Fraction) -> bool:
    return gap >= 0 and gap * gap >= r2


def _float_circum(coords, i, j, k):
    ax, ay = coords[i]
    bx, by = coords[j] - coords[i]
    cx, cy = coords[k] - coords[i]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return float(ax + ux), float(ay + uy), float(math.hypot(ux, uy))


def _ccw_order(coords, on, fcx, fcy):
    angs = []
    for q in on:
        a = math.atan2(coords[q][1] - fcy, coords[q][0] - fcx)
        if a < 0.0:
            a += 2.0 * math.pi
        angs.append((a, q))
    angs.sort()
    return [q for _, q in angs]


def _enumerate_finite(ws: WindowedSet, depth_cap: int, keep_depths) -> EventSet:
    """Brute-force path for finite sets: every circumcircle, no window rules."""
    pts = ws.points
    coords = ws.float_coords()
    seen = {}
    for i, j, k in combinations(range(len(pts)), 3):
        try:
            circ = circumcircle(pts[i], pts[j], pts[k])
        except Exception:
            continue
        key = (circ.center.x, circ.center.y, circ.r2)
        if key in seen:
            continue
        on = []
        inside = []
        for q, p in enumerate(pts):
            s = side_of(circ, p)
            if s is Side.ON:
                on.append(q)
            elif s is Side.INSIDE:
                inside.append(q)
        seen[key] = (circ, on, inside)
    keep = None if keep_depths is None else frozenset(keep_depths)
    events = []
    for circ, on, inside in seen.values():
        p = len(inside)
        if p > depth_cap or (keep is not None and p not in keep):
            continue
        fcx, fcy = circ.center.as_floats()
        fr = math.sqrt(float(circ.r2))
        events.append(CircleEvent(circ, tuple(_ccw_order(coords, on, fcx, fcy)),
                                  p, tuple(sorted(inside)), fcx, fcy, fr))
    events.sort(key=lambda e: (e.fx, e.fy, e.fr))
    return EventSet(events, ws, depth_cap, len(pts), keep_depths)


def depth(ws: WindowedSet, circle: ExactCircle):
    """Exact (p, on) of an arbitrary circle, by full scan over all sites.

    Requires the closed disk to lie inside the outer window (finite sets are
    exempt), so the counts are meaningful for the underlying infinite set.
    """
    if not ws.finite:
        c = circle.center
        if not (_side_fits(c.x - ws.outer_window.x0, circle.r2)
                and _side_fits(ws.outer_window.x1 - c.x, circle.r2)
                and _side_fits(c.y - ws.outer_window.y0, circle.r2)
                and _side_fits(ws.outer_window.y1 - c.y, circle.r2)):
            raise DiskOutsideWindowError("closed disk exceeds the outer window")
    on = []
    p = 0
    for q, pt in enumerate(ws.points):
        s = side_of(circle, pt)
        if s is Side.ON:
            on.append(q)
        elif s is Side.INSIDE:
            p += 1
    return p, on
