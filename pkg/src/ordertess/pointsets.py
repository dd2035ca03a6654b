"""Generators for the input families and the windowing metadata they carry.

Every generator returns a WindowedSet: the points, an outer window that is
fully populated, and an inner window inside which downstream computations are
trusted.  Random coordinates live on a dyadic grid (denominator 2**32) so that
all predicates stay exact while accidental degeneracy has measure zero in
practice and is detected by the genericity scan when it occurs.

Randomness comes from numpy's Philox generator, a counter-based RNG whose bit
stream is fully determined by the seed, giving bit-identical sets per
(generator, parameters, seed) across platforms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import GenericityFailure
from .exactgeom import ExactPoint

GRID = 1 << 32
RETRY_BUDGET = 16


@dataclass(frozen=True, slots=True)
class Rect:
    """Axis-aligned rational rectangle."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    @staticmethod
    def of(x0, y0, x1, y1) -> "Rect":
        return Rect(Fraction(x0), Fraction(y0), Fraction(x1), Fraction(y1))

    def contains_halfopen(self, p: ExactPoint) -> bool:
        return self.x0 <= p.x < self.x1 and self.y0 <= p.y < self.y1

    def contains_closed(self, p: ExactPoint) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x0 <= other.x0 and self.y0 <= other.y0
                and other.x1 <= self.x1 and other.y1 <= self.y1)

    def area(self) -> Fraction:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def as_floats(self) -> tuple[float, float, float, float]:
        return float(self.x0), float(self.y0), float(self.x1), float(self.y1)


class WindowedSet:
    """A finite list of exact points plus trust-region metadata.

    ``finite=True`` marks sets meant to be taken literally (no window
    semantics); for those the windows are a bounding box only.
    """

    def __init__(self, points, inner_window: Rect, outer_window: Rect,
                 tag: str, seed: Optional[int] = None, finite: bool = False,
                 meta: Optional[dict] = None):
        self.points: tuple[ExactPoint, ...] = tuple(points)
        self.inner_window = inner_window
        self.outer_window = outer_window
        self.tag = tag
        self.seed = seed
        self.finite = finite
        self.meta = dict(meta or {})
        self._scaled = None
        self._floats = None

    def __len__(self) -> int:
        return len(self.points)

    # -- cached numeric views -------------------------------------------------

    def scaled(self):
        """Common denominator D and integer coordinate lists (x*D, y*D)."""
        if self._scaled is None:
            denom = 1
            for p in self.points:
                denom = denom * p.x.denominator // math.gcd(denom, p.x.denominator)
                denom = denom * p.y.denominator // math.gcd(denom, p.y.denominator)
            xs = [int(p.x * denom) for p in self.points]
            ys = [int(p.y * denom) for p in self.points]
            self._scaled = (denom, xs, ys)
        return self._scaled

    def float_coords(self) -> np.ndarray:
        if self._floats is None:
            self._floats = np.array(
                [[float(p.x), float(p.y)] for p in self.points], dtype=np.float64
            )
            self._floats.setflags(write=False)
        return self._floats

    def validate(self) -> None:
        assert self.outer_window.contains_rect(self.inner_window)
        seen = set()
        for p in self.points:
            assert self.outer_window.contains_closed(p), f"{p} outside outer window"
            key = (p.x, p.y)
            assert key not in seen, f"duplicate point {p}"
            seen.add(key)


@dataclass(frozen=True)
class GenericityReport:
    is_generic: bool
    violations: tuple = field(default_factory=tuple)  # CircleEvents with |On| >= 4


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.uint64(seed)))


def _grid_fraction(n: int) -> Fraction:
    return Fraction(int(n), GRID)


def _central_unit_window(copies: int) -> Rect:
    c = copies // 2
    return Rect.of(c, c, c + 1, c + 1)


def integer_lattice(copies: int) -> WindowedSet:
    """All integer points of a copies x copies square, (copies+1)^2 in total."""
    if copies < 3:
        raise ValueError("copies must be >= 3")
    pts = [ExactPoint.of(i, j) for i in range(copies + 1) for j in range(copies + 1)]
    return WindowedSet(
        pts,
        inner_window=_central_unit_window(copies),
        outer_window=Rect.of(0, 0, copies, copies),
        tag=f"zsquare(copies={copies})",
    )


def _check_generic(ws: WindowedSet, scan_depth: int) -> GenericityReport:
    # small sets or tight windows cannot support the full scan depth; clamp
    from .events import max_usable_order

    cap = min(scan_depth, len(ws.points) - 3, max_usable_order(ws) - 1)
    return genericity_report(ws, cap)


def perturbed_lattice(copies: int, tau: Fraction, seed: int,
                      scan_depth: int = 8) -> WindowedSet:
    """Integer lattice with i.i.d. dyadic offsets of Euclidean norm <= tau.

    tau must satisfy 0 <= tau < 1/4; the displacement bound holds exactly in
    rational arithmetic.  Regenerates (bounded retries) until the genericity
    scan up to scan_depth passes.
    """
    tau = Fraction(tau)
    if not (0 <= tau < Fraction(1, 4)):
        raise ValueError("tau must satisfy 0 <= tau < 1/4")
    if copies < 3:
        raise ValueError("copies must be >= 3")
    if tau == 0:
        ws = integer_lattice(copies)
        return WindowedSet(ws.points, ws.inner_window, ws.outer_window,
                           tag=f"perturbed(copies={copies},tau=0)", seed=seed)

    tmax = (tau.numerator * GRID) // tau.denominator  # offsets in [-tmax, tmax]
    t2_num = tau.numerator * tau.numerator * GRID * GRID
    t2_den = tau.denominator * tau.denominator
    for attempt in range(RETRY_BUDGET):
        rng = _rng(seed + (attempt << 32))
        pts = []
        for i in range(copies + 1):
            for j in range(copies + 1):
                while True:
                    dx, dy = (int(v) for v in rng.integers(-tmax, tmax + 1, size=2))
                    if (dx * dx + dy * dy) * t2_den <= t2_num:
                        break
                pts.append(ExactPoint(
                    Fraction(i) + _grid_fraction(dx),
                    Fraction(j) + _grid_fraction(dy),
                ))
        lo = -tau
        hi = copies + tau
        ws = WindowedSet(
            pts,
            inner_window=_central_unit_window(copies),
            outer_window=Rect(lo, lo, hi, hi),
            tag=f"perturbed(copies={copies},tau={tau})",
            seed=seed,
            meta={"tau": tau, "attempt": attempt},
        )
        if _check_generic(ws, scan_depth).is_generic:
            return ws
    raise GenericityFailure(f"perturbed_lattice not generic after {RETRY_BUDGET} tries")


def _sample_unit_square(rng: np.random.Generator, n0: int) -> list[ExactPoint]:
    pts = []
    seen = set()
    while len(pts) < n0:
        x, y = (int(v) for v in rng.integers(0, GRID, size=2, dtype=np.int64))
        if (x, y) in seen:
            continue
        seen.add((x, y))
        pts.append(ExactPoint(_grid_fraction(x), _grid_fraction(y)))
    return pts


def _replicate(base: list[ExactPoint], copies: int) -> list[ExactPoint]:
    out = []
    for bi in range(copies):
        for bj in range(copies):
            for p in base:
                out.append(ExactPoint(p.x + bi, p.y + bj))
    return out


def random_periodic(n0: int, copies: int, seed: int) -> WindowedSet:
    """n0 uniform points in the unit square, replicated to a copies x copies block."""
    if copies < 3 or copies % 2 == 0:
        raise ValueError("copies must be >= 3 and odd")
    if n0 < 1:
        raise ValueError("n0 must be positive")
    rng = _rng(seed)
    base = _sample_unit_square(rng, n0)
    return WindowedSet(
        _replicate(base, copies),
        inner_window=_central_unit_window(copies),
        outer_window=Rect.of(0, 0, copies, copies),
        tag=f"periodic(n0={n0},copies={copies})",
        seed=seed,
        meta={"n0": n0},
    )


def poisson_torus(rho: float, copies: int, seed: int) -> WindowedSet:
    """Poisson(rho) many uniform points in the unit square, replicated periodically."""
    if copies < 3 or copies % 2 == 0:
        raise ValueError("copies must be >= 3 and odd")
    if rho <= 0:
        raise ValueError("rho must be positive")
    rng = _rng(seed)
    n0 = int(rng.poisson(rho))
    base = _sample_unit_square(rng, n0) if n0 > 0 else []
    return WindowedSet(
        _replicate(base, copies),
        inner_window=_central_unit_window(copies),
        outer_window=Rect.of(0, 0, copies, copies),
        tag=f"poisson(rho={rho},copies={copies})",
        seed=seed,
        meta={"rho": rho, "n0": n0},
    )


def non_cocircular_lattice(copies: int, seed: int, scan_depth: int = 30) -> WindowedSet:
    """Lattice with basis (1,0), (q1, 1+q2) and no small cocircular quadruple.

    q1, q2 are small random rationals; the set is regenerated until the
    genericity scan up to scan_depth finds no circle through four points whose
    center lies in the inner window.
    """
    if copies < 3:
        raise ValueError("copies must be >= 3")
    for attempt in range(RETRY_BUDGET):
        rng = _rng(seed + (attempt << 32))
        r1, r2 = (int(v) for v in rng.integers(5, 64, size=2))
        s1 = 1 if int(rng.integers(0, 2)) else -1
        q1 = Fraction(s1 * r1, 1024)
        q2 = Fraction(r2, 1024)
        if q1 == 0 and q2 == 0:
            continue
        ymax = copies * (1 + q2)
        pts = []
        shear = int(math.ceil(copies * abs(float(q1)))) + 1
        for j in range(copies + 1):
            y = j * (1 + q2)
            for i in range(-shear, copies + shear + 1):
                x = i + j * q1
                if 0 <= x <= copies:
                    pts.append(ExactPoint(x, y))
        c = copies // 2
        inner = Rect(Fraction(c), c * (1 + q2), Fraction(c + 1), (c + 1) * (1 + q2))
        ws = WindowedSet(
            pts,
            inner_window=inner,
            outer_window=Rect(Fraction(0), Fraction(0), Fraction(copies), ymax),
            tag=f"ncl(copies={copies},q1={q1},q2={q2})",
            seed=seed,
            meta={"q1": [q1.numerator, q1.denominator],
                  "q2": [q2.numerator, q2.denominator], "attempt": attempt},
        )
        if _check_generic(ws, scan_depth).is_generic:
            return ws
    raise GenericityFailure(
        f"non_cocircular_lattice still degenerate after {RETRY_BUDGET} tries"
    )


def finite_example_triangle_barycenter() -> WindowedSet:
    """Near-equilateral rational triangle plus its exact barycenter (finite set).

    An exact equilateral triangle has irrational coordinates; we use the
    closest apex height on the dyadic grid, so angle identities hold to about
    1e-6 rather than exactly.
    """
    s = Fraction(round(math.sqrt(3.0) / 2.0 * GRID), GRID)
    a = ExactPoint.of(0, 0)
    b = ExactPoint.of(1, 0)
    c = ExactPoint(Fraction(1, 2), s)
    d = ExactPoint((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)
    box = Rect.of(-1, -1, 2, 2)
    return WindowedSet([a, b, c, d], inner_window=box, outer_window=box,
                       tag="triangle+barycenter", finite=True)


def genericity_report(ws: WindowedSet, depth_cap: int) -> GenericityReport:
    """Scan circle events up to depth_cap; report circles with >= 4 on-sites."""
    from .events import enumerate_events

    ev = enumerate_events(ws, depth_cap)
    bad = tuple(e for e in ev.events if len(e.on) >= 4)
    return GenericityReport(is_generic=not bad, violations=bad)


# -- JSON interchange ---------------------------------------------------------

def _rect_to_json(r: Rect) -> list[int]:
    return [r.x0.numerator, r.x0.denominator, r.y0.numerator, r.y0.denominator,
            r.x1.numerator, r.x1.denominator, r.y1.numerator, r.y1.denominator]


def _rect_from_json(v) -> Rect:
    return Rect(Fraction(v[0], v[1]), Fraction(v[2], v[3]),
                Fraction(v[4], v[5]), Fraction(v[6], v[7]))


def to_json_dict(ws: WindowedSet) -> dict:
    d = {
        "tag": ws.tag,
        "seed": ws.seed,
        "inner_window": _rect_to_json(ws.inner_window),
        "outer_window": _rect_to_json(ws.outer_window),
        "points": [
            [p.x.numerator, p.x.denominator, p.y.numerator, p.y.denominator]
            for p in ws.points
        ],
    }
    if ws.finite:
        d["finite"] = True
    if ws.meta:
        d["meta"] = ws.meta
    return d


def from_json_dict(d: dict) -> WindowedSet:
    pts = [ExactPoint(Fraction(xn, xd), Fraction(yn, yd))
           for xn, xd, yn, yd in d["points"]]
    return WindowedSet(
        pts,
        inner_window=_rect_from_json(d["inner_window"]),
        outer_window=_rect_from_json(d["outer_window"]),
        tag=d.get("tag", ""),
        seed=d.get("seed"),
        finite=bool(d.get("finite", False)),
        meta=d.get("meta"),
    )


def save_pointset(ws: WindowedSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_dict(ws), fh)
        fh.write("\n")


def load_pointset(path) -> WindowedSet:
    with open(path) as fh:
        return from_json_dict(json.load(fh))
