"""Benchmark the candidate-triple prefilter: jit kernel vs numpy fallback.

Captures the exact kernel invocations made by a real event enumeration, then
replays them against both backends, checking that they return identical
triple sets.  Run with ORDERTESS_DISABLE_NUMBA=1 to confirm the fallback is
what end-to-end enumeration uses when numba is off.

Usage: python3 benchmarks/bench_prefilter.py [--rho 400] [--copies 3] [--depth 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ordertess import _kernels, events, pointsets


def capture_calls(ws, depth_cap):
    calls = []
    original = _kernels.prefilter_triples

    def recorder(*args):
        calls.append(args)
        return original(*args)

    _kernels.prefilter_triples = recorder
    events.prefilter_triples = recorder
    try:
        es = events.enumerate_events(ws, depth_cap)
    finally:
        _kernels.prefilter_triples = original
        events.prefilter_triples = original
    return calls, es


def run_backend(name, fn, calls, repeats=3):
    best = float("inf")
    outputs = []
    for rep in range(repeats):
        outputs.clear()
        t0 = time.perf_counter()
        for args in calls:
            outputs.append(fn(*args))
        best = min(best, time.perf_counter() - t0)
    n = sum(len(o[0]) for o in outputs)
    print(f"{name:>12}: {best * 1e3:9.2f} ms  ({n} candidate triples)")
    return best, outputs


def as_sets(outputs):
    return [set(zip(map(int, i), map(int, j), map(int, k)))
            for i, j, k in outputs]


def prep(args):
    a = list(args)
    a[0] = np.ascontiguousarray(a[0], dtype=np.float64)
    a[1] = np.ascontiguousarray(a[1], dtype=np.float64)
    for idx in (2, 3, 4):
        a[idx] = np.ascontiguousarray(a[idx], dtype=np.int64)
    a[6] = np.asarray(a[6], dtype=np.float64)
    a[7] = np.asarray(a[7], dtype=np.float64)
    return tuple(a)


def jit_backend(px, py, anchors, indptr, nbrs, rmax, region, outer, slack):
    empty = np.empty(0, np.int64)
    n = _kernels._prefilter_jit(px, py, anchors, indptr, nbrs, rmax, region,
                                outer, slack, empty, empty, empty, 0)
    oi = np.empty(n, np.int64)
    oj = np.empty(n, np.int64)
    ok = np.empty(n, np.int64)
    _kernels._prefilter_jit(px, py, anchors, indptr, nbrs, rmax, region,
                            outer, slack, oi, oj, ok, 1)
    return oi, oj, ok


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rho", type=float, default=400.0)
    ap.add_argument("--copies", type=int, default=3)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    opts = ap.parse_args()

    ws = pointsets.poisson_torus(rho=opts.rho, copies=opts.copies,
                                 seed=opts.seed)
    print(f"{len(ws.points)} sites, depth cap {opts.depth}, "
          f"numba available: {_kernels.NUMBA_AVAILABLE}")

    t0 = time.perf_counter()
    calls, es = capture_calls(ws, opts.depth)
    total = time.perf_counter() - t0
    print(f"end-to-end enumeration: {total:.2f} s, {len(es.events)} events, "
          f"{len(calls)} kernel calls")

    calls = [prep(c) for c in calls]
    results = {}
    if _kernels.NUMBA_AVAILABLE:
        jit_backend(*calls[0])  # compile before timing
        _, results["jit"] = run_backend("numba jit", jit_backend, calls)
    _, results["numpy"] = run_backend(
        "numpy", lambda *a: _kernels._prefilter_numpy(*a), calls)

    if len(results) == 2:
        same = as_sets(results["jit"]) == as_sets(results["numpy"])
        print("backend outputs identical:", same)
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
