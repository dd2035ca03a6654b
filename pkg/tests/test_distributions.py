import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordertess import distributions as dist
from ordertess import events, pointsets
from ordertess.distributions import (MILES_F, MILES_G, MILES_H,
                                     empirical_density, fit_report,
                                     h_second_derivative, miles_density,
                                     sample_density, simpson_integral)
from ordertess.errors import DomainError, EmptySampleError

PI = math.pi


def test_density_normalization():
    for kind in (MILES_F, MILES_G, MILES_H):
        assert simpson_integral(kind) == pytest.approx(1.0, abs=1e-9)


def test_density_endpoint_and_peak_values():
    assert miles_density(MILES_F, 0.0) == 0.0
    assert miles_density(MILES_F, PI) == pytest.approx(0.0, abs=1e-30)
    assert miles_density(MILES_F, PI / 2) == pytest.approx(4 / (3 * PI))
    assert miles_density(MILES_H, PI / 2) == pytest.approx(4 / (3 * PI))


def test_g_is_reflected_f():
    for t in np.linspace(0.01, PI - 0.01, 37):
        assert miles_density(MILES_G, t) == pytest.approx(
            miles_density(MILES_F, PI - t), abs=0)


def test_h_is_average():
    for t in np.linspace(0.01, PI - 0.01, 37):
        avg = 0.5 * (miles_density(MILES_F, t) + miles_density(MILES_G, t))
        assert miles_density(MILES_H, t) == pytest.approx(avg, abs=1e-14)


def test_h_concave():
    for t in np.linspace(0.0, PI, 2001):
        assert h_second_derivative(float(t)) <= 1e-12


def test_h_second_derivative_matches_finite_differences():
    eps = 1e-5
    for t in np.linspace(0.1, PI - 0.1, 23):
        fd = (miles_density(MILES_H, t + eps) - 2 * miles_density(MILES_H, t)
              + miles_density(MILES_H, t - eps)) / (eps * eps)
        assert h_second_derivative(float(t)) == pytest.approx(fd, abs=1e-5)


def test_h_second_derivative_value():
    assert h_second_derivative(PI / 4) == pytest.approx(-2.0 / 3.0, abs=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        miles_density(MILES_F, -0.1)
    with pytest.raises(DomainError):
        h_second_derivative(4.0)
    with pytest.raises(ValueError):
        miles_density("nope", 1.0)


def test_empirical_density_validation():
    with pytest.raises(EmptySampleError):
        empirical_density([])
    with pytest.raises(DomainError):
        empirical_density([0.5, PI + 0.1])
    h = empirical_density([0.5, 1.0, 1.5], bins=8)
    assert h.total == 3
    assert h.counts.sum() == 3
    widths = np.diff(h.edges)
    assert float(np.sum(h.density * widths)) == pytest.approx(1.0)


def test_sampling_matches_density():
    rng = np.random.Generator(np.random.Philox(5))
    s = sample_density(MILES_F, 40_000, rng)
    s = s[(s > 0) & (s < PI)]
    l1, ks, n = fit_report(empirical_density(s), MILES_F)
    assert l1 < 0.05
    assert ks < 0.02


def test_self_consistency_threshold_shrinks():
    t_small = dist.self_consistency_threshold(MILES_F, 500, replicates=3)
    t_big = dist.self_consistency_threshold(MILES_F, 50_000, replicates=3)
    assert t_big < t_small


@given(st.floats(min_value=1e-6, max_value=PI - 1e-6))
@settings(max_examples=200, deadline=None)
def test_densities_nonnegative(t):
    for kind in (MILES_F, MILES_G, MILES_H):
        assert miles_density(kind, t) >= 0.0


def test_poisson_delaunay_angles_fit_f():
    ws = pointsets.poisson_torus(rho=250.0, copies=3, seed=2)
    es = events.enumerate_events(ws, depth_cap=1)
    from ordertess.angles import structure_angles

    vals = [s.value for s in structure_angles(es, "Del", 2)]
    hist = empirical_density(vals)
    l1, _, n = fit_report(hist, MILES_F)
    thr = dist.self_consistency_threshold(MILES_F, n)
    assert l1 < 1.5 * thr


def test_vertex_density_report_periodic_identity():
    """Periodic general-position inputs have exactly 2(p+1) events of depth p
    per generating point, which pins the observed densities."""
    ws = pointsets.random_periodic(n0=40, copies=5, seed=1)
    es = events.enumerate_events(ws, depth_cap=2)
    rep = dist.vertex_density_report(es, 3, rho=40.0)
    assert rep.new_observed == pytest.approx(2 * 3 * 40.0)
    assert rep.old_observed == pytest.approx(2 * 2 * 40.0)
    assert rep.new_expected == 6 * 40.0
    assert rep.old_expected == 5 * 40.0
    rep1 = dist.vertex_density_report(es, 1, rho=40.0)
    assert rep1.old_observed is None and rep1.old_expected is None


def test_histogram_csv(tmp_path):
    h = empirical_density([0.5, 1.0, 1.5, 2.0], bins=4)
    p = tmp_path / "h.csv"
    dist.write_histogram_csv(p, h, MILES_F)
    lines = p.read_text().splitlines()
    assert lines[0] == "bin_left,bin_right,count,density,closed_form_density"
    assert len(lines) == 5
