import math
from fractions import Fraction

import pytest

from ordertess import counterexample as ce
from ordertess.errors import InvalidParamsError
from ordertess.events import depth
from ordertess.exactgeom import ExactCircle, ExactPoint, dist2


def test_param_validation():
    with pytest.raises(InvalidParamsError):
        ce.CounterexampleParams(k=5).validate()
    with pytest.raises(InvalidParamsError):
        ce.CounterexampleParams(k=8, tau=Fraction(1, 3)).validate()
    with pytest.raises(InvalidParamsError):
        ce.CounterexampleParams(k=8, eps=Fraction(0)).validate()
    ce.CounterexampleParams(k=6).validate()


def test_bound_values_ordering():
    params = ce.CounterexampleParams(k=10)
    b13, b14, b15 = ce.bound_values(params)
    # the satellite angle floor must clear the order-(k+1) cap
    assert b14 > b15 > b13
    assert b13 < math.pi and b14 < math.pi
    assert b14 == pytest.approx(
        math.pi - 2 * 0.01 / (math.sqrt(8 / math.pi) - math.sqrt(2) / 2 - 0.2))


def test_construction_exact_invariants():
    params = ce.CounterexampleParams(k=6, seed=0)
    ws = ce.build_counterexample(params)
    i1, i2 = ws.meta["satellites"]
    a1, a2 = ws.points[i1], ws.points[i2]
    axn, axd, ayn, ayd = ws.meta["anchor"]
    a = ExactPoint(Fraction(axn, axd), Fraction(ayn, ayd))
    eps2 = params.eps * params.eps
    assert dist2(a1, a) <= eps2
    assert dist2(a2, a) <= eps2
    cxn, cxd, cyn, cyd = ws.meta["circle_center"]
    c = ExactPoint(Fraction(cxn, cxd), Fraction(cyn, cyd))
    r2 = dist2(a, c)
    assert dist2(a1, c) == r2
    assert dist2(a2, c) == r2
    p, on = depth(ws, ExactCircle(c, r2))
    assert p == params.k - 2
    assert len(on) == 3


def test_verification_passes():
    params = ce.CounterexampleParams(k=6, seed=1)
    ws = ce.build_counterexample(params)
    rep = ce.verify_counterexample(ws, params)
    assert rep.passed
    assert rep.omega_del_k > rep.omega_del_k1
    assert rep.omega_del_k > rep.bound_14
    assert rep.omega_del_k1 < rep.bound_15
    assert rep.satellite_circle_depth == params.k - 2
    assert rep.satellite_angle > rep.bound_14


def test_round_trip_via_json(tmp_path):
    from ordertess.pointsets import load_pointset, save_pointset

    params = ce.CounterexampleParams(k=6, seed=2)
    ws = ce.build_counterexample(params)
    path = tmp_path / "ce.json"
    save_pointset(ws, path)
    back = load_pointset(path)
    rep = ce.verify_counterexample(back, params)
    assert rep.passed


def test_report_serialization(tmp_path):
    import json

    params = ce.CounterexampleParams(k=6, seed=0)
    ws = ce.build_counterexample(params)
    rep = ce.verify_counterexample(ws, params)
    p = tmp_path / "rep.json"
    ce.save_report(p, rep)
    d = json.loads(p.read_text())
    assert d["pass"] is True
    assert d["k"] == 6
    assert d["tau"] == "1/5"
