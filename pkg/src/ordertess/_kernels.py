"""Hot inner loops: the float prefilter over site triples.

The prefilter proposes candidate circumcircles with generous tolerances;
every survivor is re-verified in exact integer arithmetic by the events
module, so the only requirement here is to never drop a true event.  The
tolerance analysis: coordinates are dyadic rationals representable exactly in
float64, so differences are exact and the circumcenter is accurate to a few
ulps relative to the triangle conditioning; near-collinear triples with
bounded chords have circumradius far above any radius cap, which keeps the
slack generous.

Set ORDERTESS_DISABLE_NUMBA=1 to select the pure-numpy fallback path (used by
the benchmark and by the kernel-equivalence test).
"""

from __future__ import annotations

import os

import numpy as np

TOL = 1e-6

_DISABLE = os.environ.get("ORDERTESS_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
NUMBA_AVAILABLE = False
if not _DISABLE:
    try:
        from numba import njit

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover
        pass


def _prefilter_py(px, py, anchors, indptr, nbrs, rmax, region, outer, slack,
                  out_i, out_j, out_k, fill):
    """Count (fill=0) or emit (fill=1) candidate triples.  Numba-compatible."""
    rmax2 = rmax * rmax * (1.0 + TOL) + slack
    chord2 = 4.0 * rmax * rmax * (1.0 + TOL) + slack
    rx0 = region[0] - slack
    ry0 = region[1] - slack
    rx1 = region[2] + slack
    ry1 = region[3] + slack
    ox0 = outer[0] - slack
    oy0 = outer[1] - slack
    ox1 = outer[2] + slack
    oy1 = outer[3] + slack
    count = 0
    for t in range(anchors.shape[0]):
        i = anchors[t]
        ax = px[i]
        ay = py[i]
        lo = indptr[t]
        hi = indptr[t + 1]
        for jj in range(lo, hi):
            j = nbrs[jj]
            bx = px[j] - ax
            by = py[j] - ay
            for kk in range(jj + 1, hi):
                k = nbrs[kk]
                cx = px[k] - ax
                cy = py[k] - ay
                dx = cx - bx
                dy = cy - by
                if dx * dx + dy * dy > chord2:
                    continue
                d = 2.0 * (bx * cy - by * cx)
                if d == 0.0:
                    continue
                b2 = bx * bx + by * by
                c2 = cx * cx + cy * cy
                ux = (cy * b2 - by * c2) / d
                uy = (bx * c2 - cx * b2) / d
                r2 = ux * ux + uy * uy
                if r2 > rmax2:
                    continue
                wx = ax + ux
                wy = ay + uy
                if wx < rx0 or wx > rx1 or wy < ry0 or wy > ry1:
                    continue
                r = np.sqrt(r2)
                if wx - r < ox0 or wx + r > ox1 or wy - r < oy0 or wy + r > oy1:
                    continue
                if fill:
                    out_i[count] = i
                    out_j[count] = j
                    out_k[count] = k
                count += 1
    return count


if NUMBA_AVAILABLE:
    _prefilter_jit = njit(cache=True)(_prefilter_py)


def _prefilter_numpy(px, py, anchors, indptr, nbrs, rmax, region, outer, slack):
    """Vectorized fallback: one pair-broadcast per anchor."""
    rmax2 = rmax * rmax * (1.0 + TOL) + slack
    chord2 = 4.0 * rmax * rmax * (1.0 + TOL) + slack
    rx0, ry0, rx1, ry1 = region
    ox0, oy0, ox1, oy1 = outer
    out = []
    for t in range(anchors.shape[0]):
        i = int(anchors[t])
        nb = nbrs[indptr[t]:indptr[t + 1]]
        if nb.shape[0] < 2:
            continue
        bx = px[nb] - px[i]
        by = py[nb] - py[i]
        jj, kk = np.triu_indices(nb.shape[0], k=1)
        dx = bx[kk] - bx[jj]
        dy = by[kk] - by[jj]
        ok = dx * dx + dy * dy <= chord2
        jj, kk = jj[ok], kk[ok]
        b1x, b1y = bx[jj], by[jj]
        c1x, c1y = bx[kk], by[kk]
        d = 2.0 * (b1x * c1y - b1y * c1x)
        ok = d != 0.0
        jj, kk, d = jj[ok], kk[ok], d[ok]
        b1x, b1y, c1x, c1y = b1x[ok], b1y[ok], c1x[ok], c1y[ok]
        b2 = b1x * b1x + b1y * b1y
        c2 = c1x * c1x + c1y * c1y
        ux = (c1y * b2 - b1y * c2) / d
        uy = (b1x * c2 - c1x * b2) / d
        r2 = ux * ux + uy * uy
        wx = px[i] + ux
        wy = py[i] + uy
        r = np.sqrt(np.maximum(r2, 0.0))
        ok = ((r2 <= rmax2)
              & (wx >= rx0 - slack) & (wx <= rx1 + slack)
              & (wy >= ry0 - slack) & (wy <= ry1 + slack)
              & (wx - r >= ox0 - slack) & (wx + r <= ox1 + slack)
              & (wy - r >= oy0 - slack) & (wy + r <= oy1 + slack))
        for a, b in zip(nb[jj[ok]], nb[kk[ok]]):
            out.append((i, int(a), int(b)))
    if not out:
        return (np.empty(0, np.int64),) * 3
    arr = np.array(out, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def prefilter_triples(px, py, anchors, indptr, nbrs, rmax, region, outer, slack):
    """Candidate triples (i, j, k) whose circumcircle may be a window event.

    px, py: float coordinates of all sites; anchors: site indices eligible as
    the smallest member of a triple; indptr/nbrs: CSR neighbor lists (indices
    strictly greater than the anchor, within 2*rmax).  Conservative in the
    accepting direction only.
    """
    anchors = np.ascontiguousarray(anchors, dtype=np.int64)
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    nbrs = np.ascontiguousarray(nbrs, dtype=np.int64)
    region = np.asarray(region, dtype=np.float64)
    outer = np.asarray(outer, dtype=np.float64)
    if NUMBA_AVAILABLE:
        empty = np.empty(0, np.int64)
        n = _prefilter_jit(px, py, anchors, indptr, nbrs, rmax, region, outer,
                           slack, empty, empty, empty, 0)
        out_i = np.empty(n, np.int64)
        out_j = np.empty(n, np.int64)
        out_k = np.empty(n, np.int64)
        _prefilter_jit(px, py, anchors, indptr, nbrs, rmax, region, outer,
                       slack, out_i, out_j, out_k, 1)
        return out_i, out_j, out_k
    return _prefilter_numpy(px, py, anchors, indptr, nbrs, rmax, region, outer, slack)
