import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confgeo import curves, registry
from confgeo.curves import CurveJet
from confgeo.fg import AmbientPoint, ValidityError, ambient_metric
from confgeo.geodesic import kappa, state_from_jet
from confgeo.metric import GeometryError
from confgeo.slopes import decay_order
from confgeo.surface import surface_jet
from confgeo.tractor import (AmbientGraph, Tractor, acceleration, ambient_extrinsic_check,
                             ambient_lift, cge_residual_tractor, export_tractor_csv,
                             graph_vs_surface, position, slot_norm, tractor_derivative,
                             tractor_metric, velocity)

FLAT2 = registry.flat(2)


def _close(T, top, mid, bot, tol=1e-12):
    return abs(T.top - top) < tol and np.allclose(T.mid, mid, atol=tol) and abs(T.bot - bot) < tol


def test_line_tractors():
    j = curves.line().jet(0.3)
    assert _close(position(FLAT2, j), 0, [0, 0], 1)
    assert _close(velocity(FLAT2, j), 0, j.d1, 0)
    assert _close(acceleration(FLAT2, j), 1, [0, 0], 0)
    assert cge_residual_tractor(FLAT2, curves.line(), 0.3)["slot_norm"] < 1e-10


def test_circle_tractors():
    c = curves.circle()
    j = c.jet(0.3)
    A = acceleration(FLAT2, j)
    assert _close(A, 1, -j.gamma, 0)
    assert tractor_metric(A, A, np.eye(2)) == pytest.approx(1.0)
    # arc length is not a distinguished parametrisation: D_s A = -U
    DA = cge_residual_tractor(FLAT2, c, 0.3)["DA"]
    U = velocity(FLAT2, j)
    assert slot_norm(DA + U, np.eye(2)) < 1e-10
    assert acceleration(FLAT2, curves.circle(speed=3.0).jet(0.1)).top == pytest.approx(3.0)


def test_conformal_circle_is_parallel():
    assert cge_residual_tractor(FLAT2, curves.conformal_circle(), 0.4)["slot_norm"] < 1e-10


coef = st.floats(-1.0, 1.0)


@settings(max_examples=20)
@given(st.lists(coef, min_size=8, max_size=8))
def test_tractor_identities(a):
    m = registry.conformally_flat(2, "gaussian")
    a = np.array(a)
    j = CurveJet(0.0, 0.4 * a[:2], a[2:4] + np.array([1.5, 0.2]), a[4:6], a[6:8])
    h = m.at(j.gamma)
    X, U, A = position(m, j), velocity(m, j), acceleration(m, j)
    ip = lambda P, Q: tractor_metric(P, Q, h)
    assert abs(ip(X, X)) < 1e-12 and abs(ip(X, U)) < 1e-12
    assert ip(U, U) == pytest.approx(1.0, abs=1e-10)
    assert ip(X, A) == pytest.approx(-1.0, abs=1e-10)
    assert abs(ip(U, A)) < 1e-8
    assert ip(A, A) == pytest.approx(-2 * kappa(m, state_from_jet(m, j)), abs=1e-8)


@pytest.mark.parametrize("metric,curve", [
    (registry.flat(2), curves.parabola()),
    (registry.conformally_flat(2, "gaussian"), curves.circle(radius=0.7)),
    (registry.round_sphere(3), curves.polar_great_circle()),
])
def test_derivative_chain(metric, curve):
    s = 0.35
    h = metric.at(curve.jet(s).gamma)
    DX = tractor_derivative(metric, curve, lambda x: position(metric, curve.jet(x)), s)
    assert slot_norm(DX - velocity(metric, curve.jet(s)), h) < 1e-10
    DU = tractor_derivative(metric, curve, lambda x: velocity(metric, curve.jet(x)), s)
    assert slot_norm(DU - acceleration(metric, curve.jet(s)), h) < 1e-8


@settings(max_examples=15)
@given(st.lists(coef, min_size=8, max_size=8), st.floats(0.0, 2 * np.pi))
def test_connection_is_metric(c, s):
    m = registry.conformally_flat(2, "gaussian")
    curve = curves.circle(radius=0.6)
    c = np.array(c)
    T1 = lambda x: Tractor(c[0] * np.sin(x), c[1:3] * np.cos(x), c[3] + x)
    T2 = lambda x: Tractor(c[4] * x * x, c[5:7] + x, c[7] * np.cos(2 * x))
    ip = lambda x: tractor_metric(T1(x), T2(x), m.at(curve.jet(x).gamma))
    dlhs = (ip(s + 1e-4) - ip(s - 1e-4)) / 2e-4
    h = m.at(curve.jet(s).gamma)
    rhs = (tractor_metric(tractor_derivative(m, curve, T1, s), T2(s), h)
           + tractor_metric(T1(s), tractor_derivative(m, curve, T2, s), h))
    assert dlhs == pytest.approx(rhs, abs=1e-6)


@settings(max_examples=20)
@given(st.lists(coef, min_size=9, max_size=9), st.floats(0.3, 4.0))
def test_lift_preserves_metric(c, sigma):
    m = registry.round_sphere(3)
    y = np.array([1.0, 1.2, 0.3])
    a = AmbientPoint(sigma, 0.0, y)
    T1, T2 = Tractor(c[0], c[1:4], c[4]), Tractor(c[5], c[6:9], c[0] - c[5])
    v1, _ = ambient_lift(T1, a)
    v2, _ = ambient_lift(T2, a)
    g = ambient_metric(m, a)
    assert float(v1 @ g @ v2) == pytest.approx(tractor_metric(T1, T2, m.at(y)), abs=1e-12)
    # frame components scale as σ⁻¹
    _, f1 = ambient_lift(T1, a)
    _, f2 = ambient_lift(T1, AmbientPoint(2 * sigma, 0.0, y))
    assert np.allclose(f2, f1 / 2)


def test_lift_errors():
    T = Tractor(1.0, [0.0, 0.0], 0.0)
    with pytest.raises(ValidityError):
        ambient_lift(T, AmbientPoint(1.0, 0.1, [0.0, 0.0]))
    with pytest.raises(GeometryError):
        ambient_lift(T, AmbientPoint(1.0, 0.0, [0.0, 0.0, 0.0]))
    with pytest.raises(GeometryError):
        tractor_metric(T, Tractor(0.0, [1.0], 0.0), np.eye(2))


def test_line_graph_is_exact():
    g = AmbientGraph(surface_jet(FLAT2, curves.line(), resolution=64))
    for t in (0.01, 0.1):
        assert max(graph_vs_surface(g, 0.2, t).values()) < 1e-14


def test_circle_graph_agrees_with_surface():
    g = AmbientGraph(surface_jet(FLAT2, curves.circle(), resolution=128))
    ts = np.logspace(-2, -1, 8)
    d = [graph_vs_surface(g, 0.3, t) for t in ts]
    for key, k in (("x", 3.85), ("rho", 3.85), ("y", 3.85), ("sigma", 2.85)):
        assert decay_order(ts, [r[key] for r in d], min_decades=1.0).slope >= k


def test_graph_e_coefficients_leading_order():
    g = AmbientGraph(surface_jet(FLAT2, curves.circle(), resolution=128))
    t = 1e-2
    r = ambient_extrinsic_check(g, 0.3, t)
    assert r["E_ss"] == pytest.approx(r["E_ss_expected"], rel=1e-2)
    assert r["E_tt"] == pytest.approx(r["E_tt_expected"], rel=1e-2)


def test_tractor_csv(tmp_path):
    c = curves.circle()
    p = export_tractor_csv(FLAT2, c, [0.1, 0.2, 0.3], tmp_path / "tr.csv")
    rows = p.read_text().splitlines()
    assert rows[0].split(",")[-3:] == ["AA", "minus_2kappa", "DA_norm"]
    for row in rows[1:]:
        vals = list(map(float, row.split(",")))
        assert vals[-3] == pytest.approx(vals[-2])
