"""Command-line interface: reproducible experiments over the tessellation
machinery.

Exit codes: 0 success, 1 check-suite failure, 2 invalid configuration,
3 genericity failure, 4 theorem violation (implementation bug), 5 window too
small for the requested order, 6 unsupported degenerate input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import angles, counterexample, distributions, events, pointsets, tilings
from .errors import (GenericityFailure, NonGenericUnsupportedError,
                     OrderOutOfRangeError, WindowTooSmallError)

EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_NOT_GENERIC = 3
EXIT_THEOREM_VIOLATION = 4
EXIT_WINDOW_TOO_SMALL = 5
EXIT_NON_GENERIC_UNSUPPORTED = 6


def _rational(text: str) -> Fraction:
    """Parse 'p/q' or integer literals; floats are rejected on purpose."""
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(
            f"{text!r}: use an exact rational like 3/10, not a float")
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}")


def _k_range(text: str):
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


_GENERATORS = ("zsquare", "perturbed", "random", "poisson", "ncl",
               "triangle", "counterexample")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ordertess")
    top.add_argument("--threads", type=int, default=None,
                     help="bound numba worker threads")
    sub = top.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point set file")
    g.add_argument("kind", choices=_GENERATORS)
    g.add_argument("--copies", type=int, default=15)
    g.add_argument("--n0", type=int, default=50)
    g.add_argument("--rho", type=float, default=400.0)
    g.add_argument("--tau", type=_rational, default=Fraction(1, 10))
    g.add_argument("--eps", type=_rational, default=Fraction(1, 100))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int, default=10,
                   help="target order (counterexample kind only)")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--dry-run", action="store_true")

    e = sub.add_parser("extremes", help="extreme angles and monotonicity")
    e.add_argument("--input", required=True)
    e.add_argument("--k-range", type=_k_range, default=list(range(2, 11)))
    e.add_argument("--observe", action="store_true",
                   help="report observation rows without failing")
    e.add_argument("-o", "--output")
    e.add_argument("--dry-run", action="store_true")

    a = sub.add_parser("angles", help="per-structure angle samples")
    a.add_argument("--input", required=True)
    a.add_argument("--structure", choices=angles.STRUCTURES, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("-o", "--output", required=True)
    a.add_argument("--dry-run", action="store_true")

    d = sub.add_parser("distribution", help="histograms and fits vs f/g/h")
    d.add_argument("--input", required=True)
    d.add_argument("--structure", choices=angles.STRUCTURES, default="Del")
    d.add_argument("--k", type=_k_range, default=[2])
    d.add_argument("--bins", type=int, default=64)
    d.add_argument("--zone-site", action="store_true",
                   help="histogram zone angles of the most central site instead")
    d.add_argument("-o", "--output-prefix", required=True)
    d.add_argument("--dry-run", action="store_true")

    t = sub.add_parser("tiling", help="tiling JSON / SVG export")
    t.add_argument("--input", required=True)
    t.add_argument("--structure", choices=angles.STRUCTURES, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--json")
    t.add_argument("--svg")
    t.add_argument("--dry-run", action="store_true")

    c = sub.add_parser("counterexample", help="build and verify the order-k "
                                              "non-monotonicity construction")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--tau", type=_rational, default=Fraction(1, 5))
    c.add_argument("--eps", type=_rational, default=Fraction(1, 100))
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output")
    c.add_argument("--dry-run", action="store_true")

    k = sub.add_parser("check", help="run one acceptance-style suite")
    k.add_argument("--suite", required=True,
                   choices=("monotonicity", "duality", "oracle",
                            "distributions", "counterexample"))
    k.add_argument("--input")
    k.add_argument("--k", type=int, default=3)
    k.add_argument("--n", type=int, default=30)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--dry-run", action="store_true")
    return top


def _dry_run(args) -> int:
    cfg = {k: (str(v) if isinstance(v, Fraction) else v)
           for k, v in sorted(vars(args).items()) if k != "dry_run"}
    json.dump(cfg, sys.stdout, indent=1, sort_keys=True)
    print()
    return 0


def _generate(args) -> pointsets.WindowedSet:
    kind = args.kind
    if kind == "zsquare":
        return pointsets.integer_lattice(copies=args.copies)
    if kind == "perturbed":
        return pointsets.perturbed_lattice(copies=args.copies, tau=args.tau,
                                           seed=args.seed)
    if kind == "random":
        return pointsets.random_periodic(n0=args.n0, copies=args.copies,
                                         seed=args.seed)
    if kind == "poisson":
        return pointsets.poisson_torus(rho=args.rho, copies=args.copies,
                                       seed=args.seed)
    if kind == "ncl":
        return pointsets.non_cocircular_lattice(copies=args.copies,
                                                seed=args.seed)
    if kind == "triangle":
        return pointsets.finite_example_triangle_barycenter()
    params = counterexample.CounterexampleParams(
        k=args.k, tau=args.tau, eps=args.eps, seed=args.seed)
    return counterexample.build_counterexample(params)


def cmd_gen(args) -> int:
    ws = _generate(args)
    pointsets.save_pointset(ws, args.output)
    print(f"wrote {args.output}: {len(ws.points)} points, tag={ws.tag}")
    return 0


def _events_for(ws, depth_cap):
    region = None
    if ws.tag == "counterexample":
        region = counterexample._region_of(ws, int(ws.meta["k"]))
    return events.enumerate_events(ws, depth_cap, center_region=region)


def cmd_extremes(args) -> int:
    ws = pointsets.load_pointset(args.input)
    ks = args.k_range
    es = _events_for(ws, max(ks) - 1)
    rep = angles.monotonicity_report(es, ks)
    if args.output:
        angles.write_extremes_csv(args.output, rep.rows)
    for fam, viol in sorted(rep.checks.items()):
        print(f"{fam}: {'ok' if not viol else f'{len(viol)} violations'}")
    for obs in rep.observations:
        print("observation:", obs)
    if not rep.passed:
        print("theorem-guaranteed inequality failed", file=sys.stderr)
        return EXIT_THEOREM_VIOLATION
    return 0


def cmd_angles(args) -> int:
    ws = pointsets.load_pointset(args.input)
    es = _events_for(ws, args.k - 1)
    samples = angles.structure_angles(es, args.structure, args.k)
    angles.write_samples_csv(args.output, samples)
    print(f"wrote {args.output}: {len(samples)} samples")
    return 0


_FIT_KIND = {"Del": distributions.MILES_F, "Vor": distributions.MILES_G,
             "Bri": distributions.MILES_H, "Igl": distributions.MILES_H}


def cmd_distribution(args) -> int:
    ws = pointsets.load_pointset(args.input)
    ks = args.k
    es = _events_for(ws, max(ks) - 1)
    reports = []
    for k in ks:
        if args.zone_site:
            cx = (ws.inner_window.x0 + ws.inner_window.x1) / 2
            cy = (ws.inner_window.y0 + ws.inner_window.y1) / 2
            from .exactgeom import ExactPoint, dist2
            center = ExactPoint(cx, cy)
            site = min(range(len(ws.points)),
                       key=lambda i: dist2(ws.points[i], center))
            values = [v for kk in range(1, k + 1)
                      for v in angles.zone_angles(es, site, kk)]
            kind = distributions.MILES_H
        else:
            values = [s.value for s in angles.structure_angles(es, args.structure, k)]
            kind = _FIT_KIND[args.structure]
        hist = distributions.empirical_density(values, args.bins)
        l1, ks_stat, n = distributions.fit_report(hist, kind)
        path = f"{args.output_prefix}_{args.structure.lower()}_k{k}.csv"
        distributions.write_histogram_csv(path, hist, kind)
        reports.append({"structure": args.structure, "k": k, "kind": kind,
                        "l1": l1, "ks": ks_stat, "n": n})
        print(f"k={k}: n={n} l1={l1:.4f} ks={ks_stat:.4f} -> {path}")
    distributions.save_fit_report(f"{args.output_prefix}_fits.json", reports)
    return 0


def cmd_tiling(args) -> int:
    ws = pointsets.load_pointset(args.input)
    es = _events_for(ws, args.k + 1)
    builders = {"Del": tilings.delaunay_mosaic, "Igl": tilings.iglesias_mosaic,
                "Vor": tilings.voronoi_tessellation,
                "Bri": tilings.brillouin_tessellation}
    t = builders[args.structure](es, args.k)
    if args.json:
        tilings.save_tiling(args.json, t)
        print(f"wrote {args.json}")
    if args.svg:
        tilings.save_svg(args.svg, t, ws.inner_window)
        print(f"wrote {args.svg}")
    if not args.json and not args.svg:
        print(f"{args.structure}_{args.k}: {len(t.vertices)} vertices, "
              f"{len(t.edges)} edges, {len(t.tiles)} tiles")
    return 0


def cmd_counterexample(args) -> int:
    params = counterexample.CounterexampleParams(
        k=args.k, tau=args.tau, eps=args.eps, seed=args.seed)
    ws = counterexample.build_counterexample(params)
    rep = counterexample.verify_counterexample(ws, params)
    if args.output:
        counterexample.save_report(args.output, rep)
    print(f"k={args.k}: omega(Del_k)={rep.omega_del_k:.6f} "
          f"omega(Del_k+1)={rep.omega_del_k1:.6f} pass={rep.passed}")
    return 0 if rep.passed else EXIT_CHECK_FAILED


def cmd_check(args) -> int:
    if args.suite == "counterexample":
        params = counterexample.CounterexampleParams(k=args.k, seed=args.seed)
        ws = counterexample.build_counterexample(params)
        ok = counterexample.verify_counterexample(ws, params).passed
    elif args.suite == "monotonicity":
        ws = pointsets.load_pointset(args.input) if args.input else \
            pointsets.non_cocircular_lattice(copies=15, seed=args.seed)
        es = _events_for(ws, args.k - 1)
        ok = angles.monotonicity_report(es, range(2, args.k + 1)).passed
    elif args.suite == "duality":
        ws = pointsets.load_pointset(args.input) if args.input else \
            pointsets.non_cocircular_lattice(copies=15, seed=args.seed)
        es = _events_for(ws, args.k + 1)
        ok = True
        for k in range(1, args.k + 1):
            dm = tilings.delaunay_mosaic(es, k)
            vt = tilings.voronoi_tessellation(es, k)
            im = tilings.iglesias_mosaic(es, k)
            bt = tilings.brillouin_tessellation(es, k)
            ok = ok and tilings.check_orthogonal_dual(es, dm, vt).ok
            ok = ok and tilings.check_orthogonal_dual(es, im, bt).ok
    elif args.suite == "oracle":
        ok = _oracle_suite(args.n, args.k, args.seed)
    else:  # distributions
        ok = _distribution_suite(args.seed)
    print(f"suite {args.suite}: {'pass' if ok else 'FAIL'}")
    return 0 if ok else EXIT_CHECK_FAILED


def _oracle_suite(n: int, kmax: int, seed: int) -> bool:
    from itertools import combinations

    import numpy as np

    from .exactgeom import ExactPoint

    rng = np.random.Generator(np.random.Philox(seed))
    grid = pointsets.GRID
    pts = tuple(ExactPoint(Fraction(int(rng.integers(0, grid)), grid),
                           Fraction(int(rng.integers(0, grid)), grid))
                for _ in range(n))
    unit = pointsets.Rect(Fraction(0), Fraction(0), Fraction(1), Fraction(1))
    ws = pointsets.WindowedSet(pts, unit, unit, tag="finite-random",
                               seed=seed, finite=True)
    es = events.enumerate_events(ws, depth_cap=kmax)
    for k in range(1, kmax + 1):
        mosaic = tilings.delaunay_mosaic(es, k)
        sites = [tilings.aurenhammer_site(c) for c in combinations(pts, k)]
        oracle = tilings.lifted_hull_oracle(sites)
        if not _tiles_subset(mosaic, oracle):
            return False
        mosaic = tilings.iglesias_mosaic(es, k)
        sites = [tilings.iglesias_site(c, b)
                 for c in combinations(pts, k) for b in c]
        oracle = tilings.lifted_hull_oracle(sites)
        if not _tiles_subset(mosaic, oracle):
            return False
    return True


def _tiles_subset(mosaic, oracle) -> bool:
    keys = {frozenset((oracle.vertices[i].x, oracle.vertices[i].y)
                      for i in t.cycle) for t in oracle.tiles}
    return all(
        frozenset((mosaic.vertices[i].x, mosaic.vertices[i].y)
                  for i in t.cycle) in keys
        for t in mosaic.tiles if t.trusted)


def _distribution_suite(seed: int) -> bool:
    ok = abs(distributions.simpson_integral(distributions.MILES_F) - 1.0) < 1e-9
    ok = ok and abs(distributions.simpson_integral(distributions.MILES_H) - 1.0) < 1e-9
    import numpy as np
    ts = np.linspace(0.0, distributions.PI, 1001)
    ok = ok and all(distributions.h_second_derivative(float(t)) <= 1e-12 for t in ts)
    ws = pointsets.poisson_torus(rho=200.0, copies=3, seed=seed)
    es = events.enumerate_events(ws, depth_cap=1)
    vals = [s.value for s in angles.structure_angles(es, "Del", 2)]
    hist = distributions.empirical_density(vals)
    l1, _, n = distributions.fit_report(hist, distributions.MILES_F)
    thr = distributions.self_consistency_threshold(distributions.MILES_F, n)
    return ok and l1 < 1.5 * thr


_HANDLERS = {
    "gen": cmd_gen,
    "extremes": cmd_extremes,
    "angles": cmd_angles,
    "distribution": cmd_distribution,
    "tiling": cmd_tiling,
    "counterexample": cmd_counterexample,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_CONFIG if exc.code not in (0, None) else 0
    if args.threads is not None:
        try:
            import numba

            numba.set_num_threads(max(1, args.threads))
        except ImportError:
            pass
    if getattr(args, "dry_run", False):
        return _dry_run(args)
    try:
        return _HANDLERS[args.command](args)
    except (counterexample.InvalidParamsError, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except GenericityFailure as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_NOT_GENERIC
    except (WindowTooSmallError, OrderOutOfRangeError) as exc:
        print(f"window too small: {exc}", file=sys.stderr)
        return EXIT_WINDOW_TOO_SMALL
    except NonGenericUnsupportedError as exc:
        print(f"degenerate input unsupported here: {exc}", file=sys.stderr)
        return EXIT_NON_GENERIC_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
