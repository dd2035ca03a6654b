"""Exact rational planar primitives.

Points and circles carry arbitrary-precision rational coordinates, so all
side-of-circle classifications are exact sign computations.  Angles are the
single place where we leave the rationals: they are derived from exact
coordinate differences and converted to binary floating point only inside the
final two-argument arctangent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import CollinearError, DegenerateAngleError

Rational = Union[int, Fraction]


class Side(Enum):
    INSIDE = -1
    ON = 0
    OUTSIDE = 1


@dataclass(frozen=True, slots=True)
class ExactPoint:
    """Planar point with exact rational coordinates.

    Fraction keeps numerator/denominator in lowest terms with a positive
    denominator, so value equality is exact equality.
    """

    x: Fraction
    y: Fraction

    @staticmethod
    def of(x: Rational, y: Rational) -> "ExactPoint":
        return ExactPoint(Fraction(x), Fraction(y))

    def __add__(self, other: "ExactPoint") -> "ExactPoint":
        return ExactPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "ExactPoint") -> "ExactPoint":
        return ExactPoint(self.x - other.x, self.y - other.y)

    def scale(self, s: Rational) -> "ExactPoint":
        s = Fraction(s)
        return ExactPoint(self.x * s, self.y * s)

    def norm2(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def as_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


@dataclass(frozen=True, slots=True)
class ExactCircle:
    """Circle given by exact center and exact squared radius."""

    center: ExactPoint
    r2: Fraction


def dist2(a: ExactPoint, b: ExactPoint) -> Fraction:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def orient2d(a: ExactPoint, b: ExactPoint, c: ExactPoint) -> int:
    """Sign of twice the signed area of triangle abc (+1 ccw, -1 cw, 0 collinear)."""
    det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (det > 0) - (det < 0)


def circumcircle(a: ExactPoint, b: ExactPoint, c: ExactPoint) -> ExactCircle:
    """Exact circumcircle of three pairwise distinct, non-collinear points.

    The center solves the two perpendicular-bisector equations; raises
    CollinearError when the orientation determinant vanishes.
    """
    bx = b.x - a.x
    by = b.y - a.y
    cx = c.x - a.x
    cy = c.y - a.y
    d = 2 * (bx * cy - by * cx)
    if d == 0:
        raise CollinearError(f"no circumcircle through {a}, {b}, {c}")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = ExactPoint(a.x + ux, a.y + uy)
    return ExactCircle(center, ux * ux + uy * uy)


def side_of(circle: ExactCircle, p: ExactPoint) -> Side:
    """Exact classification of p against the circle."""
    s = dist2(p, circle.center) - circle.r2
    if s < 0:
        return Side.INSIDE
    if s > 0:
        return Side.OUTSIDE
    return Side.ON


def angle_at(a: ExactPoint, apex: ExactPoint, b: ExactPoint) -> float:
    """Interior angle of triangle a-apex-b at the apex, in (0, pi).

    Cross and dot products are computed exactly; the only rounding happens in
    the final atan2.  Degenerate configurations (zero legs or collinear with
    angle 0 or pi) raise DegenerateAngleError.
    """
    vx = a.x - apex.x
    vy = a.y - apex.y
    wx = b.x - apex.x
    wy = b.y - apex.y
    if (vx == 0 and vy == 0) or (wx == 0 and wy == 0):
        raise DegenerateAngleError("angle leg has zero length")
    cross = vx * wy - vy * wx
    if cross == 0:
        raise DegenerateAngleError("collinear points give angle 0 or pi")
    dot = vx * wx + vy * wy
    return math.atan2(float(abs(cross)), float(dot))


def angle_from_int_vectors(vx: int, vy: int, wx: int, wy: int) -> float:
    """angle_at for integer-scaled coordinate differences (scale cancels)."""
    cross = vx * wy - vy * wx
    if cross == 0:
        raise DegenerateAngleError("collinear points give angle 0 or pi")
    dot = vx * wx + vy * wy
    return math.atan2(float(abs(cross)), float(dot))
