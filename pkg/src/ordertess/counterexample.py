"""Construction showing Voronoi minimum angles need not be monotone.

A perturbed integer lattice P gets two extra satellite points a', a'' within
eps of a central site a, placed on a circle through a that encloses exactly
k-2 points.  The inscribed angle at a is then nearly pi, which inflates the
order-k Delaunay maximum angle above what any order-(k+1) circle can
produce, reversing the usual inequality at one order.

All placement arithmetic is exact: the circle grows along a fixed rational
direction, sites enter it at rational threshold radii, and the satellites
are rational rotations of a about the chosen center.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstructionFailureError, InvalidParamsError
from .events import depth as circle_depth
from .events import enumerate_events
from .exactgeom import ExactCircle, ExactPoint, dist2
from .pointsets import Rect, WindowedSet, perturbed_lattice

PI = math.pi

# rational unit vectors (from Pythagorean triples) tried in seed-rotated order
_DIRECTIONS = [
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(-8, 17), Fraction(15, 17)),
    (Fraction(20, 29), Fraction(-21, 29)),
    (Fraction(-7, 25), Fraction(-24, 25)),
    (Fraction(12, 37), Fraction(35, 37)),
]


@dataclass(frozen=True, slots=True)
class CounterexampleParams:
    k: int
    tau: Fraction = Fraction(1, 5)
    eps: Fraction = Fraction(1, 100)
    seed: int = 0

    def validate(self) -> None:
        if self.k < 6:
            raise InvalidParamsError("construction needs k >= 6")
        if not 0 < self.tau < Fraction(1, 4):
            raise InvalidParamsError("tau must lie in (0, 1/4)")
        if self.eps <= 0:
            raise InvalidParamsError("eps must be positive")


@dataclass
class CounterexampleReport:
    params: CounterexampleParams
    omega_del_k: float
    omega_del_k1: float
    bound_13: float
    bound_14: float
    bound_15: float
    satellite_circle_depth: int
    satellite_angle: float
    passed: bool


def bound_values(params: CounterexampleParams):
    """Closed-form angle bounds: the order-(k+1) cap for the plain lattice,
    the satellite lower bound at order k, and the order-(k+1) cap once the
    satellites are present."""
    params.validate()
    k = params.k
    tau = float(params.tau)
    eps = float(params.eps)
    upper_r = math.sqrt(k / PI) + math.sqrt(2.0) / 2.0 + tau
    lower_r = math.sqrt((k - 2) / PI) - math.sqrt(2.0) / 2.0 - tau
    if lower_r <= 0:
        raise InvalidParamsError("radius lower bound not positive")
    b13 = PI - (1.0 - 2.0 * tau) / upper_r
    b14 = PI - 2.0 * eps / lower_r
    b15 = PI - ((1.0 - 2.0 * tau - eps) / 2.0) / upper_r
    return b13, b14, b15


def _lattice_size(k: int) -> int:
    reach = 2.0 * math.sqrt((k + 2) / PI) + 4.0
    return 2 * math.ceil(reach)


def _satellite_radius(points, a: ExactPoint, u, k: int, rmax: Fraction):
    """Exact radius r* such that the circle through a centered a + r*.u
    encloses exactly k-2 of the given points.

    Site x enters the growing circle at threshold |x-a|^2 / (2 u.(x-a)); the
    radius is the midpoint of the (k-2)-nd and (k-1)-st smallest thresholds.
    """
    ux, uy = u
    thresholds = []
    for x in points:
        dx = x.x - a.x
        dy = x.y - a.y
        dot = ux * dx + uy * dy
        if dot <= 0:
            continue
        r = (dx * dx + dy * dy) / (2 * dot)
        if r <= rmax:
            thresholds.append(r)
    need = k - 1
    if len(thresholds) < need:
        return None
    thresholds.sort()
    lo, hi = thresholds[k - 3], thresholds[k - 2]
    if lo == hi:
        return None
    return (lo + hi) / 2


def _rotate_about(c: ExactPoint, p: ExactPoint, m: int, sign: int) -> ExactPoint:
    """Exact rational rotation of p about c by the angle with
    tan(theta/2) = 1/m, signed; chord shrinks like 2r/m."""
    den = m * m + 1
    cos_t = Fraction(m * m - 1, den)
    sin_t = Fraction(2 * m * sign, den)
    dx = p.x - c.x
    dy = p.y - c.y
    return ExactPoint(c.x + cos_t * dx - sin_t * dy,
                      c.y + sin_t * dx + cos_t * dy)


def build_counterexample(params: CounterexampleParams) -> WindowedSet:
    """P plus two satellites whose circle has exact depth k-2; generic."""
    params.validate()
    k = params.k
    copies = _lattice_size(k)
    sidx = params.seed % len(_DIRECTIONS)
    last_reason = "no direction attempted"
    for attempt in range(len(_DIRECTIONS)):
        u = _DIRECTIONS[(sidx + attempt) % len(_DIRECTIONS)]
        ws = _try_build(params, copies, u)
        if isinstance(ws, str):
            last_reason = ws
            continue
        return ws
    raise ConstructionFailureError(
        f"satellite placement failed for all directions: {last_reason}")


def _try_build(params: CounterexampleParams, copies: int, u):
    k = params.k
    p_set = perturbed_lattice(copies=copies, tau=params.tau, seed=params.seed)
    cx = (p_set.outer_window.x0 + p_set.outer_window.x1) / 2
    cy = (p_set.outer_window.y0 + p_set.outer_window.y1) / 2
    center = ExactPoint(cx, cy)
    a = min(p_set.points, key=lambda p: dist2(p, center))

    margin = min(a.x - p_set.outer_window.x0, p_set.outer_window.x1 - a.x,
                 a.y - p_set.outer_window.y0, p_set.outer_window.y1 - a.y)
    rmax = margin / 2 - 1  # satellite disk must fit the outer window easily
    rstar = _satellite_radius(p_set.points, a, u, k, rmax)
    if rstar is None:
        return "no admissible threshold gap"
    c = ExactPoint(a.x + rstar * u[0], a.y + rstar * u[1])

    # chord 2 r / sqrt(m^2+1) <= (7/8) eps, two different rotation magnitudes
    m1 = 1
    while Fraction(256, 49) * rstar * rstar > params.eps * params.eps * (m1 * m1 + 1):
        m1 *= 2
    m1 *= 2
    m2 = 2 * m1
    a1 = _rotate_about(c, a, m1, +1)
    a2 = _rotate_about(c, a, m2, -1)
    for sat in (a1, a2):
        if dist2(sat, a) > params.eps * params.eps:
            return "satellite farther than eps"

    points = p_set.points + (a1, a2)
    ws = WindowedSet(points=points, inner_window=p_set.inner_window,
                     outer_window=p_set.outer_window, tag="counterexample",
                     seed=params.seed, finite=False,
                     meta={"k": k, "tau": [params.tau.numerator, params.tau.denominator],
                           "eps": [params.eps.numerator, params.eps.denominator],
                           "anchor": [a.x.numerator, a.x.denominator,
                                      a.y.numerator, a.y.denominator],
                           "circle_center": [c.x.numerator, c.x.denominator,
                                             c.y.numerator, c.y.denominator],
                           "satellites": [len(points) - 2, len(points) - 1],
                           "copies": copies})

    circ = ExactCircle(c, rstar * rstar)
    depth_p, on = circle_depth(ws, circ)
    if depth_p != k - 2 or len(on) != 3:
        return f"satellite circle depth {depth_p}, |on| {len(on)}"

    es = _events_around(ws, k)
    if isinstance(es, str):
        return es
    if not es.generic:
        return "cocircular degeneracy after adding satellites"
    return ws


def _region_of(ws: WindowedSet, k: int) -> Rect:
    """Small analysis window centered on the satellite circle's center: wide
    enough to populate every depth, small enough to keep exact work cheap."""
    cx_n, cx_d, cy_n, cy_d = ws.meta["circle_center"]
    cx = Fraction(cx_n, cx_d)
    cy = Fraction(cy_n, cy_d)
    half = Fraction(3, 2)
    return Rect(cx - half, cy - half, cx + half, cy + half)


def _events_around(ws: WindowedSet, k: int):
    try:
        return enumerate_events(ws, depth_cap=k, center_region=_region_of(ws, k))
    except Exception as exc:  # window sizing is derived, surface the reason
        return f"event enumeration failed: {exc}"


def verify_counterexample(ws: WindowedSet, params: CounterexampleParams) -> CounterexampleReport:
    """Measures omega(Del_k) and omega(Del_{k+1}) on the constructed set and
    checks the bound ordering that makes the non-monotonicity certain."""
    from .angles import depth_tables, extreme_angles

    params.validate()
    k = params.k
    b13, b14, b15 = bound_values(params)
    es = _events_around(ws, k)
    if isinstance(es, str):
        raise ConstructionFailureError(es)
    tables = depth_tables(es, k)
    _, omega_k = extreme_angles(tables, es, "Del", k)
    _, omega_k1 = extreme_angles(tables, es, "Del", k + 1)

    i1, i2 = ws.meta["satellites"]
    a1, a2 = ws.points[i1], ws.points[i2]
    ax_n, ax_d, ay_n, ay_d = ws.meta["anchor"]
    a = ExactPoint(Fraction(ax_n, ax_d), Fraction(ay_n, ay_d))
    from .exactgeom import angle_at, circumcircle

    sat_angle = angle_at(a1, a, a2)
    circ = circumcircle(a1, a, a2)
    depth_p, _ = circle_depth(ws, circ)

    ok = (omega_k > omega_k1
          and omega_k > b14
          and omega_k1 < b15
          and depth_p == k - 2)
    return CounterexampleReport(params, omega_k, omega_k1, b13, b14, b15,
                                depth_p, sat_angle, ok)


def save_report(path, rep: CounterexampleReport) -> None:
    payload = {
        "k": rep.params.k,
        "tau": str(rep.params.tau),
        "eps": str(rep.params.eps),
        "seed": rep.params.seed,
        "omega_del_k": rep.omega_del_k,
        "omega_del_k_plus_1": rep.omega_del_k1,
        "bound_13": rep.bound_13,
        "bound_14": rep.bound_14,
        "bound_15": rep.bound_15,
        "satellite_circle_depth": rep.satellite_circle_depth,
        "satellite_angle": rep.satellite_angle,
        "pass": rep.passed,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
