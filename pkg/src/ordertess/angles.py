"""Angle machinery on top of enumerated circle events.

Depth tables hold, per depth l, the smallest inscribed angle (alpha) and the
smallest supplement (beta) over all events whose depth range covers l.  From
the tables the extreme angles of the four order-k structures follow by closed
formulas; on degenerate inputs the Brillouin angles are enumerated directly
at each vertex instead.

All angle values are derived from exact integer coordinate differences, with
rounding confined to the final arctangent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (DepthUnpopulatedError, NonGenericUnsupportedError,
                     OrderOutOfRangeError)
from .events import CircleEvent, EventSet
from .exactgeom import angle_from_int_vectors

PI = math.pi

DIRECT = "Direct"
SUPPLEMENTARY = "Supplementary"

STRUCTURES = ("Del", "Vor", "Bri", "Igl")


@dataclass(frozen=True, slots=True)
class AngleSample:
    value: float
    depth: int
    kind: str
    structure: str
    order: int
    event_ref: int


@dataclass
class DepthTables:
    """Window minima of inscribed angles (alpha) and supplements (beta)."""

    alpha: list
    beta: list
    l_max: int
    counts: list

    def populated(self, l: int) -> bool:
        return 0 <= l <= self.l_max and self.counts[l] > 0

    def require(self, l: int) -> None:
        if not self.populated(l):
            raise DepthUnpopulatedError(l)


def inscribed_angles(es: EventSet, event: CircleEvent):
    """All angles ∠a_i a_j a_m over triples of on-sites, apex a_j.

    For a triangle these are its three interior angles; with more on-sites
    the inscribed angle theorem makes many of them coincide.
    """
    _, X, Y = es.source.scaled()
    out = []
    for i, j, m in combinations(event.on, 3):
        for apex, u, v in ((j, i, m), (i, j, m), (m, i, j)):
            out.append(angle_from_int_vectors(X[u] - X[apex], Y[u] - Y[apex],
                                              X[v] - X[apex], Y[v] - Y[apex]))
    return out


def depth_range(event: CircleEvent):
    """Depths l the event contributes to: p <= l <= p + |on| - 3."""
    return event.depth_p, event.depth_p + len(event.on) - 3


def depth_tables(es: EventSet, l_max: int) -> DepthTables:
    if l_max > es.depth_cap:
        raise ValueError(f"l_max {l_max} exceeds enumerated depth cap {es.depth_cap}")
    if es.kept_depths is not None and not set(range(l_max + 1)) <= es.kept_depths:
        raise ValueError("event set was filtered below the requested l_max")
    alpha = [None] * (l_max + 1)
    beta = [None] * (l_max + 1)
    counts = [0] * (l_max + 1)
    for ev in es.events:
        lo, hi = depth_range(ev)
        if lo > l_max:
            continue
        angs = inscribed_angles(es, ev)
        amin = min(angs)
        amax = max(angs)
        for l in range(lo, min(hi, l_max) + 1):
            counts[l] += len(angs)
            if alpha[l] is None or amin < alpha[l]:
                alpha[l] = amin
            supp = PI - amax
            if beta[l] is None or supp < beta[l]:
                beta[l] = supp
    for l in range(l_max + 1):
        if counts[l] == 0:
            raise DepthUnpopulatedError(l)
    return DepthTables(alpha, beta, l_max, counts)


# ---------------------------------------------------------------------------
# Brillouin vertex angles (valid with or without genericity)

def brillouin_vertex_angles(es: EventSet, event: CircleEvent, k: int):
    """Angles of Bri_k at this event's center, as (value, owner_site) pairs.

    With p sites inside and a_0..a_n on the circle (ccw), the center is a
    Bri_k vertex for p+1 <= k <= p+n+1.  For each owner a = a_0 the boundary
    of the owner's k-th zone turns through either one supplementary angle
    (k = p+1 or k = p+n+1) or two inscribed angles at consecutive arc steps.
    """
    p = event.depth_p
    n = len(event.on) - 1
    if not (p + 1 <= k <= p + n + 1):
        raise OrderOutOfRangeError(
            f"k={k} outside [{p + 1}, {p + n + 1}] for this event")
    _, X, Y = es.source.scaled()
    out = []
    on = event.on
    for s in range(n + 1):
        lab = [on[(s + t) % (n + 1)] for t in range(n + 1)]  # a_0..a_n, a_0 = owner
        a = lab[0]

        def ang(u, v):
            return angle_from_int_vectors(X[u] - X[a], Y[u] - Y[a],
                                          X[v] - X[a], Y[v] - Y[a])

        if k == p + 1 or k == p + n + 1:
            out.append((PI - ang(lab[n], lab[1]), a))
        else:
            j = k - p
            out.append((ang(lab[j - 1], lab[j]), a))
            j2 = p + n + 1 - k
            out.append((ang(lab[j2], lab[j2 + 1]), a))
    return out


def zone_angles(es: EventSet, site: int, k: int):
    """All corner angles of the k-th Brillouin zone of the given site."""
    out = []
    seen_any = False
    for ev in es.events:
        if site not in ev.on:
            continue
        p = ev.depth_p
        n1 = len(ev.on)
        if not (p + 1 <= k <= p + n1):
            continue
        seen_any = True
        for value, owner in brillouin_vertex_angles(es, ev, k):
            if owner == site:
                out.append(value)
    if not out and not seen_any:
        raise OrderOutOfRangeError(f"no zone-{k} vertices found for site {site}")
    return out


# ---------------------------------------------------------------------------
# Per-structure angle samples (Lemma-style placement on generic events)

_NEEDED_DEPTHS = {
    "Del": (-2, -1),
    "Vor": (-2, -1),
    "Igl": (-3, -2, -1),
    "Bri": (-3, -2, -1),
}


def needed_depths(structure: str, k: int):
    return tuple(k + off for off in _NEEDED_DEPTHS[structure] if k + off >= 0)


def _check_generic_for(es: EventSet, structure: str, k: int) -> None:
    need = set(needed_depths(structure, k))
    for ev in es.events:
        if len(ev.on) == 3:
            continue
        lo, hi = depth_range(ev)
        if need & set(range(lo, hi + 1)):
            raise NonGenericUnsupportedError(
                f"{structure}_{k} angles undefined: event with "
                f"{len(ev.on)} cocircular sites at depth {ev.depth_p}")


def structure_angles(es: EventSet, structure: str, k: int):
    """Vertex/corner angle samples of the order-k structure from all events.

    Generic events place each inscribed angle phi at depth l into Del_{l+1},
    Del_{l+2}, Igl_{l+1}, Igl_{l+3} and (twice) Bri_{l+2}, and its supplement
    into Vor_{l+1}, Vor_{l+2}, Bri_{l+1}, Bri_{l+3} and (twice) Igl_{l+2}.
    Brillouin samples on degenerate events come from the per-vertex zone
    enumeration instead; Del/Vor/Igl refuse degenerate input.
    """
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}")
    if k < 1:
        raise OrderOutOfRangeError("order k must be >= 1")
    samples = []
    if structure != "Bri":
        _check_generic_for(es, structure, k)
    for ref, ev in enumerate(es.events):
        p = ev.depth_p
        if structure == "Bri" and len(ev.on) > 3:
            if p + 1 <= k <= p + len(ev.on):
                for value, _ in brillouin_vertex_angles(es, ev, k):
                    kind = SUPPLEMENTARY if k in (p + 1, p + len(ev.on)) else DIRECT
                    samples.append(AngleSample(value, p, kind, "Bri", k, ref))
            continue
        if len(ev.on) != 3:
            continue
        placements = _generic_placements(structure, k, p)
        if not placements:
            continue
        angs = inscribed_angles(es, ev)
        for kind, mult in placements:
            for phi in angs:
                value = phi if kind == DIRECT else PI - phi
                for _ in range(mult):
                    samples.append(AngleSample(value, p, kind, structure, k, ref))
    return samples


def _generic_placements(structure: str, k: int, l: int):
    """(kind, multiplicity) pairs for a depth-l generic event at order k."""
    out = []
    if structure == "Del":
        if k in (l + 1, l + 2):
            out.append((DIRECT, 1))
    elif structure == "Vor":
        if k in (l + 1, l + 2):
            out.append((SUPPLEMENTARY, 1))
    elif structure == "Igl":
        if k in (l + 1, l + 3):
            out.append((DIRECT, 1))
        if k == l + 2:
            out.append((SUPPLEMENTARY, 2))
    elif structure == "Bri":
        if k == l + 2:
            out.append((DIRECT, 2))
        if k in (l + 1, l + 3):
            out.append((SUPPLEMENTARY, 1))
    return out


# ---------------------------------------------------------------------------
# Extremes and monotonicity

def extreme_angles(tables: DepthTables, es: EventSet, structure: str, k: int):
    """(alpha_min, omega_max) of the order-k structure over the window.

    Generic path reads the depth tables; on degenerate input only the
    Brillouin minimum (and by supplement duality the Iglesias maximum) is
    available, the other entry is None.
    """
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}")
    if k < 1:
        raise OrderOutOfRangeError("order k must be >= 1")
    if es.generic:
        a = tables.alpha
        b = tables.beta

        def mn(*terms):
            vals = []
            for arr, l in terms:
                if l < 0:
                    continue
                tables.require(l)
                vals.append(arr[l])
            if not vals:
                raise DepthUnpopulatedError(k - 1)
            return min(vals)

        if structure == "Del":
            alpha = mn((a, k - 2), (a, k - 1))
            omega = PI - mn((b, k - 2), (b, k - 1))
        elif structure == "Vor":
            omega = PI - mn((a, k - 2), (a, k - 1))
            alpha = mn((b, k - 2), (b, k - 1))
        elif structure == "Igl":
            alpha = mn((a, k - 3), (b, k - 2), (a, k - 1))
            omega = PI - mn((b, k - 3), (a, k - 2), (b, k - 1))
        else:  # Bri
            alpha = mn((b, k - 3), (a, k - 2), (b, k - 1))
            omega = PI - mn((a, k - 3), (b, k - 2), (a, k - 1))
        return alpha, omega

    # degenerate input: enumerate Brillouin vertex angles directly
    if structure == "Bri":
        vals = _bri_multiset(es, k)
        return min(vals), max(vals)
    if structure == "Igl":
        vals = _bri_multiset(es, k)
        return None, PI - min(vals)
    raise NonGenericUnsupportedError(
        f"{structure} extremes undefined on degenerate input")


def _bri_multiset(es: EventSet, k: int):
    vals = []
    for ev in es.events:
        p = ev.depth_p
        if p + 1 <= k <= p + len(ev.on):
            vals.extend(v for v, _ in brillouin_vertex_angles(es, ev, k))
    if not vals:
        raise DepthUnpopulatedError(k - 1)
    return vals


def delaunay_tile_angles(es: EventSet, k: int):
    """Corner angles of all order-k Delaunay tiles, degeneracy included.

    The tile dual to an event with p inside and m on-sites (p+1 <= k <=
    p+m-1) has one corner per cyclic run of k-p consecutive on-sites: the
    mean of the inside sites plus the run.  Corner angles of that convex
    polygon are returned for every qualifying event.
    """
    denom, X, Y = es.source.scaled()
    out = []
    for ev in es.events:
        p = ev.depth_p
        m = len(ev.on)
        if not (p + 1 <= k <= p + m - 1):
            continue
        ux = sum(X[i] for i in ev.inside)
        uy = sum(Y[i] for i in ev.inside)
        corners = []
        for s in range(m):
            run = [ev.on[(s + t) % m] for t in range(k - p)]
            corners.append((ux + sum(X[i] for i in run),
                            uy + sum(Y[i] for i in run)))
        cn = len(corners)
        for t in range(cn):
            px, py = corners[t]
            qx, qy = corners[(t - 1) % cn]
            rx, ry = corners[(t + 1) % cn]
            out.append(angle_from_int_vectors(qx - px, qy - py, rx - px, ry - py))
    if not out:
        raise DepthUnpopulatedError(k - 1)
    return out


@dataclass
class MonotonicityReport:
    k_range: tuple
    generic: bool
    rows: dict  # k -> {structure: (alpha, omega)}
    checks: dict = field(default_factory=dict)  # family -> list of violations
    observations: list = field(default_factory=list)
    slack: float = 1e-12

    @property
    def passed(self) -> bool:
        return all(not v for v in self.checks.values())


def monotonicity_report(es: EventSet, k_range, slack: float = 1e-12) -> MonotonicityReport:
    """Window extremes for k in k_range plus the monotonicity checks.

    Generic sets: alpha non-increasing for Del/Igl/Bri and omega
    non-decreasing for Vor/Bri/Igl.  Degenerate sets: only the Brillouin
    minimum and the Iglesias maximum are checked.  The unguaranteed families
    (Vor minimum, Del maximum) are reported as observations, never failures.
    """
    ks = sorted(k_range)
    generic = es.generic
    if generic:
        tables = depth_tables(es, max(ks) - 1)
    rows = {}
    for k in ks:
        row = {}
        if generic:
            for m in STRUCTURES:
                row[m] = extreme_angles(tables, es, m, k)
        else:
            a_bri, o_bri = extreme_angles(None, es, "Bri", k)
            row["Bri"] = (a_bri, o_bri)
            row["Igl"] = extreme_angles(None, es, "Igl", k)
        rows[k] = row

    checks = {}
    obs = []
    dec = [("Del", 0), ("Igl", 0), ("Bri", 0)] if generic else [("Bri", 0)]
    inc = [("Vor", 1), ("Bri", 1), ("Igl", 1)] if generic else [("Igl", 1)]
    for m, _ in dec:
        fam = f"alpha({m}) non-increasing"
        checks[fam] = [
            (k, rows[k][m][0], rows[k2][m][0])
            for k, k2 in zip(ks, ks[1:])
            if rows[k][m][0] is not None and rows[k2][m][0] is not None
            and rows[k][m][0] < rows[k2][m][0] - slack
        ]
    for m, _ in inc:
        fam = f"omega({m}) non-decreasing"
        checks[fam] = [
            (k, rows[k][m][1], rows[k2][m][1])
            for k, k2 in zip(ks, ks[1:])
            if rows[k][m][1] is not None and rows[k2][m][1] is not None
            and rows[k][m][1] > rows[k2][m][1] + slack
        ]
    if generic:
        for k, k2 in zip(ks, ks[1:]):
            if rows[k]["Vor"][0] < rows[k2]["Vor"][0] - slack:
                obs.append(("alpha(Vor) increased", k, rows[k]["Vor"][0],
                            rows[k2]["Vor"][0]))
            if rows[k]["Del"][1] > rows[k2]["Del"][1] + slack:
                obs.append(("omega(Del) decreased", k, rows[k]["Del"][1],
                            rows[k2]["Del"][1]))
    return MonotonicityReport((ks[0], ks[-1]), generic, rows, checks, obs, slack)


# ---------------------------------------------------------------------------
# CSV export

def write_extremes_csv(path, rows):
    """rows: dict k -> {structure: (alpha, omega)} as in MonotonicityReport."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["structure", "k", "alpha_min", "omega_max", "status"])
        for k in sorted(rows):
            for m in STRUCTURES:
                if m not in rows[k]:
                    continue
                a, o = rows[k][m]
                status = "ok" if a is not None and o is not None else "partial"
                w.writerow([m, k,
                            "" if a is None else f"{a:.17g}",
                            "" if o is None else f"{o:.17g}", status])


def write_samples_csv(path, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["structure", "k", "depth", "kind", "value"])
        for s in samples:
            w.writerow([s.structure, s.order, s.depth, s.kind, f"{s.value:.17g}"])
