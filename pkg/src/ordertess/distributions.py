"""Closed-form angle densities for Poisson inputs, plus empirical checks.

The three densities: f for Delaunay angles, g(t) = f(pi - t) for Voronoi
angles, and their average h for Brillouin/Iglesias angles.  Empirical
histograms of structure angles are compared against these with L1 and
Kolmogorov-Smirnov statistics; thresholds come from a self-consistency run
that samples the closed form itself at matched sample size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySampleError

PI = math.pi

MILES_F = "MilesF"
MILES_G = "MilesG"
MILES_H = "MilesH"

_SIMPSON_PANELS = 10_000

# The bracketed shape terms integrate to (3/4) pi over [0, pi]; the leading
# constants below make each density a probability density (unit integral).
_CF = 4.0 / (3.0 * PI)
_CH = 2.0 / (3.0 * PI)


def miles_density(kind: str, t: float) -> float:
    if not 0.0 <= t <= PI:
        raise DomainError(f"t={t} outside [0, pi]")
    if kind == MILES_F:
        return _CF * ((PI - t) * math.cos(t) + math.sin(t)) * math.sin(t)
    if kind == MILES_G:
        return miles_density(MILES_F, PI - t)
    if kind == MILES_H:
        return _CH * ((PI - 2.0 * t) * math.cos(t)
                      + 2.0 * math.sin(t)) * math.sin(t)
    raise ValueError(f"unknown density kind {kind!r}")


def _density_vec(kind: str, t: np.ndarray) -> np.ndarray:
    if kind == MILES_F:
        return _CF * ((PI - t) * np.cos(t) + np.sin(t)) * np.sin(t)
    if kind == MILES_G:
        return _density_vec(MILES_F, PI - t)
    if kind == MILES_H:
        return _CH * ((PI - 2.0 * t) * np.cos(t) + 2.0 * np.sin(t)) * np.sin(t)
    raise ValueError(f"unknown density kind {kind!r}")


def h_second_derivative(t: float) -> float:
    """Second derivative of the normalized h."""
    if not 0.0 <= t <= PI:
        raise DomainError(f"t={t} outside [0, pi]")
    return -(8.0 / (3.0 * PI)) * (PI - 2.0 * t) * math.sin(t) * math.cos(t)


def simpson_integral(kind: str, a: float = 0.0, b: float = PI,
                     panels: int = _SIMPSON_PANELS) -> float:
    """Composite Simpson quadrature of the named density at fixed panels."""
    x = np.linspace(a, b, 2 * panels + 1)
    y = _density_vec(kind, x)
    h = (b - a) / (2 * panels)
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()))


def density_cdf_grid(kind: str, n: int = 4096):
    """(t, F(t)) on a uniform grid, F by cumulative trapezoid, F(pi) -> 1."""
    t = np.linspace(0.0, PI, n + 1)
    y = np.clip(_density_vec(kind, t), 0.0, None)
    cdf = np.concatenate([[0.0], np.cumsum((y[1:] + y[:-1]) * 0.5 * (PI / n))])
    cdf /= cdf[-1]
    return t, cdf


def sample_density(kind: str, n: int, rng) -> np.ndarray:
    """Inverse-CDF sampling on a fine numeric cumulative."""
    t, cdf = density_cdf_grid(kind)
    u = rng.random(n)
    return np.interp(u, cdf, t)


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def density(self) -> np.ndarray:
        widths = np.diff(self.edges)
        return self.counts / (self.total * widths)


def empirical_density(samples, bins: int = 64) -> Histogram:
    samples = np.asarray(list(samples), dtype=float)
    if samples.size == 0:
        raise EmptySampleError("no angle samples")
    if samples.min() <= 0.0 or samples.max() >= PI:
        raise DomainError("angle samples must lie strictly inside (0, pi)")
    edges = np.linspace(0.0, PI, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    return Histogram(edges, counts, int(samples.size))


def fit_report(hist: Histogram, kind: str):
    """(l1, ks, n) of the histogram against the closed-form density.

    L1 compares the normalized histogram with the bin-averaged closed form;
    KS compares the empirical step cumulative with the numeric cumulative at
    the bin edges.
    """
    widths = np.diff(hist.edges)
    mids_fine = np.linspace(0.0, PI, 8 * len(widths) + 1)
    y = _density_vec(kind, mids_fine)
    # bin average of the closed form by fine trapezoid within each bin
    cdf_fine = np.concatenate([[0.0], np.cumsum(
        (y[1:] + y[:-1]) * 0.5 * np.diff(mids_fine))])
    cdf_fine /= cdf_fine[-1]
    per_bin = np.interp(hist.edges, mids_fine, cdf_fine)
    model = np.diff(per_bin) / widths
    l1 = float(np.sum(np.abs(hist.density - model) * widths))
    emp_cdf = np.concatenate([[0.0], np.cumsum(hist.counts)]) / hist.total
    ks = float(np.max(np.abs(emp_cdf - per_bin)))
    return l1, ks, hist.total


def self_consistency_threshold(kind: str, n: int, bins: int = 64,
                               replicates: int = 5, seed: int = 0) -> float:
    """Mean L1 of histograms drawn from the closed form itself at size n."""
    rng = np.random.Generator(np.random.Philox(seed))
    vals = []
    for _ in range(replicates):
        s = sample_density(kind, n, rng)
        s = s[(s > 0.0) & (s < PI)]
        l1, _, _ = fit_report(empirical_density(s, bins), kind)
        vals.append(l1)
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# Poisson vertex densities

@dataclass
class VertexDensityReport:
    k: int
    rho: float
    area: float
    new_observed: float      # per unit area
    old_observed: float | None
    new_expected: float      # 2 k rho
    old_expected: float | None  # (2k-1) rho, absent at k=1
    degree3_angles: int
    degree6_angles: int


def vertex_density_report(es, k: int, rho: float) -> VertexDensityReport:
    """Observed densities of order-k Voronoi vertices in the trusted window.

    New vertices are events of depth k-1, old ones events of depth k-2.
    Expected values follow the stated (2k-1) rho / 2k rho split; the angle
    counters tally angles at degree-3 and degree-6 order-k Brillouin
    vertices of the same event set.
    """
    area = float(es.source.inner_window.area())
    new_count = 0
    old_count = 0
    deg3 = 0
    deg6 = 0
    for ev in es.events:
        p, m = ev.depth_p, len(ev.on)
        if p == k - 1:
            new_count += 1
        if p == k - 2:
            old_count += 1
        if p + 1 <= k <= p + m:
            if k in (p + 1, p + m):
                deg3 += m
            else:
                deg6 += 2 * m
    return VertexDensityReport(
        k=k, rho=rho, area=area,
        new_observed=new_count / area,
        old_observed=None if k < 2 else old_count / area,
        new_expected=2.0 * k * rho,
        old_expected=None if k < 2 else (2.0 * k - 1.0) * rho,
        degree3_angles=deg3, degree6_angles=deg6)


# ---------------------------------------------------------------------------
# Export

def write_histogram_csv(path, hist: Histogram, kind: str) -> None:
    import csv

    widths = np.diff(hist.edges)
    dens = hist.density
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_left", "bin_right", "count", "density",
                    "closed_form_density"])
        for i in range(len(widths)):
            mid = 0.5 * (hist.edges[i] + hist.edges[i + 1])
            w.writerow([f"{hist.edges[i]:.17g}", f"{hist.edges[i + 1]:.17g}",
                        int(hist.counts[i]), f"{dens[i]:.17g}",
                        f"{miles_density(kind, mid):.17g}"])


def save_fit_report(path, entries) -> None:
    """entries: list of dicts with structure/k/kind/l1/ks/n/threshold."""
    with open(path, "w") as fh:
        json.dump(list(entries), fh, indent=1, sort_keys=True)
        fh.write("\n")
