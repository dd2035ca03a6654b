from fractions import Fraction

import numpy as np

from ordertess.exactgeom import ExactPoint
from ordertess.pointsets import GRID, Rect, WindowedSet


def finite_random_set(n: int, seed: int = 0) -> WindowedSet:
    """n distinct dyadic-grid points in the unit square, taken literally
    (no window replication semantics)."""
    rng = np.random.Generator(np.random.Philox(seed))
    pts = []
    seen = set()
    while len(pts) < n:
        x, y = (int(v) for v in rng.integers(0, GRID, size=2, dtype=np.int64))
        if (x, y) in seen:
            continue
        seen.add((x, y))
        pts.append(ExactPoint(Fraction(x, GRID), Fraction(y, GRID)))
    unit = Rect.of(0, 0, 1, 1)
    return WindowedSet(pts, unit, unit, tag=f"finite-random(n={n})",
                       seed=seed, finite=True)
