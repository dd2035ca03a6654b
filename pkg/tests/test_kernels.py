import subprocess
import sys

import numpy as np
import pytest

from ordertess import _kernels, events, pointsets


def _kernel_inputs(seed=0, n0=15, depth=3):
    ws = pointsets.random_periodic(n0=n0, copies=5, seed=seed)
    px = ws.float_coords()[:, 0].copy()
    py = ws.float_coords()[:, 1].copy()
    import scipy.spatial as sps

    bounds = events.radius_bounds(ws, depth, ws.inner_window)
    rmax = float(bounds[-1])
    tree = sps.cKDTree(np.column_stack([px, py]))
    pairs = tree.query_pairs(2.0 * rmax * (1 + 1e-6), output_type="ndarray")
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    anchors, starts = np.unique(lo, return_index=True)
    indptr = np.append(starts, len(lo)).astype(np.int64)
    region = np.array(ws.inner_window.as_floats())
    outer = np.array(ws.outer_window.as_floats())
    return (px, py, anchors.astype(np.int64), indptr, hi.astype(np.int64),
            rmax, region, outer, 1e-9)


def _triples(out):
    i, j, k = out
    return set(zip(map(int, i), map(int, j), map(int, k)))


def test_python_and_numpy_backends_agree():
    args = _kernel_inputs()
    npy = _triples(_kernels._prefilter_numpy(*args))
    assert npy
    # reference loop backend
    n = _kernels._prefilter_py(*args[:9], np.empty(0, np.int64),
                               np.empty(0, np.int64), np.empty(0, np.int64), 0)
    oi = np.empty(n, np.int64)
    oj = np.empty(n, np.int64)
    ok = np.empty(n, np.int64)
    _kernels._prefilter_py(*args[:9], oi, oj, ok, 1)
    assert _triples((oi, oj, ok)) == npy


@pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba disabled")
def test_jit_backend_agrees():
    args = _kernel_inputs(seed=1)
    npy = _triples(_kernels._prefilter_numpy(*args))
    empty = np.empty(0, np.int64)
    n = _kernels._prefilter_jit(*args, empty, empty, empty, 0)
    oi = np.empty(n, np.int64)
    oj = np.empty(n, np.int64)
    ok = np.empty(n, np.int64)
    _kernels._prefilter_jit(*args, oi, oj, ok, 1)
    assert _triples((oi, oj, ok)) == npy


def test_dispatcher_matches_reference():
    args = _kernel_inputs(seed=2)
    assert _triples(_kernels.prefilter_triples(*args)) == \
        _triples(_kernels._prefilter_numpy(*args))


def test_env_flag_disables_numba():
    code = ("import ordertess._kernels as k; "
            "print(k.NUMBA_AVAILABLE)")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"ORDERTESS_DISABLE_NUMBA": "1", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True)
    assert out.stdout.strip() == "False"


def test_event_sets_identical_across_backends():
    """End-to-end determinism: enumeration with the fallback backend yields
    byte-identical event data."""
    code = """
import os, sys, hashlib
from ordertess import events, pointsets
ws = pointsets.random_periodic(n0=12, copies=5, seed=5)
es = events.enumerate_events(ws, depth_cap=3)
h = hashlib.sha256()
for ev in sorted(es.events, key=lambda e: (e.circle.center.x, e.circle.center.y, e.circle.r2)):
    h.update(repr((ev.circle, ev.on, ev.depth_p, ev.inside)).encode())
print(h.hexdigest())
"""
    runs = {}
    for flag in ("0", "1"):
        out = subprocess.run([sys.executable, "-c", code],
                             env={"ORDERTESS_DISABLE_NUMBA": flag,
                                  "PATH": "/usr/bin:/bin"},
                             capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        runs[flag] = out.stdout.strip()
    assert runs["0"] == runs["1"]
