import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confgeo import curves, registry
from confgeo.fg import ValidityError
from confgeo.slopes import decay_order
from confgeo.surface import (HemisphereSurface, embed, export_surface_csv, gauss_curvature,
                             induced_metric, k_norm, mean_curvature, normal_frame, surface_jet)

FLAT2 = registry.flat(2)
TS = np.logspace(-3, -1.5, 12)


@pytest.fixture(scope="module")
def circle_jet():
    return surface_jet(FLAT2, curves.circle(), resolution=128)


@pytest.fixture(scope="module")
def line_jet():
    return surface_jet(FLAT2, curves.line(), resolution=64)


def test_line_coefficients(line_jet):
    x1, x3, y0, y2, n = line_jet.coefficients(0.2, 0)
    assert x1[0] == pytest.approx(1.0) and abs(x3[0]) < 1e-12
    assert np.allclose(y0[0], [0.2, 0]) and np.allclose(y2[0], 0) and np.allclose(n[0], 0)


def test_circle_coefficients(circle_jet):
    s = 0.3
    x1, x3, y0, y2, _ = circle_jet.coefficients(s, 0)
    gam = np.array([np.cos(s), np.sin(s)])
    assert x1[0] == pytest.approx(1.0)
    assert x3[0] == pytest.approx(-1.0, abs=1e-10)
    assert np.allclose(y2[0], -gam / 2, atol=1e-10)
    X = embed(circle_jet, s, 0.1)
    assert X.x == pytest.approx(0.1 - 1e-3 / 3, abs=1e-10)
    assert np.allclose(X.y, gam * (1 - 0.005), atol=1e-10)


def test_radius_two_coefficient():
    j = surface_jet(FLAT2, curves.circle(radius=2.0), resolution=128)
    assert j.coefficients(0.1, 0)[1][0] == pytest.approx(-0.25, abs=1e-10)


def test_induced_metric(line_jet, circle_jet):
    assert np.allclose(induced_metric(line_jet, 0.1, 0.1), np.eye(2) / 0.01, rtol=1e-14)
    G = 0.05**2 * induced_metric(circle_jet, 0.3, 0.05)
    # leading behaviour t⁻²(1 + ⅔κ t²) with κ = -½
    assert G[0, 0] == pytest.approx(1 - 0.05**2 / 3, abs=1e-5)
    assert G[1, 1] == pytest.approx(1 - 0.05**2 / 3, abs=1e-5)
    assert abs(G[0, 1]) < 1e-10


def test_line_normal_frame(line_jet):
    perp, N = normal_frame(line_jet, 0.1, 0.1)
    assert np.allclose(perp, [[0, 0, 1]]) and N[0, 0] == pytest.approx(100)


def test_asymptotic_normal_is_orthogonal_to_third_order():
    m = registry.conformally_flat(2, "gaussian")
    j = surface_jet(m, curves.circle(radius=0.8), resolution=128)
    eta = j.boundary_normals(0.3)[0]
    ip = []
    for t in TS:
        pt = j.point(0.3, t)
        Phi = j.asymptotic_normal(0.3, t, eta)
        ip.append(t * t * (Phi @ j.g.at(pt.X) @ pt.tangents.T))
    ip = np.array(ip)
    assert np.max(np.abs(ip[:, 0])) < 1e-10 or decay_order(TS, ip[:, 0]).slope >= 2.85
    assert decay_order(TS, ip[:, 1]).slope >= 2.85


def test_k_norm_examples(line_jet, circle_jet):
    assert k_norm(line_jet, 0.2, 0.05) < 1e-12
    h = HemisphereSurface()
    assert max(k_norm(h, s, t) for s in (0.1, 2.0) for t in (0.1, 0.5, 0.9)) < 1e-12
    assert decay_order(TS, [k_norm(circle_jet, 0.3, t) for t in TS]).slope >= 2.85


def test_parabola_k_norm_is_second_order():
    j = surface_jet(FLAT2, curves.parabola(), resolution=256)
    slope = decay_order(TS, [k_norm(j, 0.4, t) for t in TS]).slope
    assert 1.85 <= slope <= 2.15


def test_mean_curvature_contrast(circle_jet):
    assert abs(mean_curvature(circle_jet, 0.3, 1e-3)[0]) < 1e-5
    off = lambda jet: 0.1 * np.array([-jet.d1[1], jet.d1[0]]) / np.linalg.norm(jet.d1)
    wrong = surface_jet(FLAT2, curves.circle(), v_offset=off, resolution=128)
    assert abs(mean_curvature(wrong, 0.3, 1e-3)[0]) == pytest.approx(0.1, rel=1e-3)


def test_hemisphere_gauss_curvature():
    assert gauss_curvature(HemisphereSurface(), 0.4, 0.3) == pytest.approx(-1, abs=1e-8)


def test_jet_gauss_curvature_approaches_minus_one(circle_jet):
    ts = np.logspace(-2, np.log10(0.32), 8)
    dev = [gauss_curvature(circle_jet, 0.3, t) + 1 for t in ts]
    assert decay_order(ts, dev).slope >= 3


@settings(max_examples=10)
@given(st.floats(0.4, 3.0), st.floats(0.0, 2 * np.pi))
def test_circle_k_norm_scale_invariance(r, s):
    # dilation y -> r y is an isometry of the hyperbolic metric
    j = surface_jet(FLAT2, curves.circle(radius=r, speed=r), resolution=96)
    j1 = surface_jet(FLAT2, curves.circle(), resolution=96)
    t = 0.02
    assert k_norm(j, s, t) == pytest.approx(k_norm(j1, s, t), rel=1e-6, abs=1e-12)


def test_validity_errors(circle_jet):
    with pytest.raises(ValidityError):
        circle_jet.point(0.1, 0.0)
    with pytest.raises(ValidityError):
        circle_jet.point(0.1, 0.9)


def test_surface_csv(tmp_path, circle_jet):
    p = export_surface_csv(circle_jet, [0.1, 0.2], [0.01, 0.02, 0.03], tmp_path / "s.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == "s,t,x,y0,y1,K_norm,TrK0,G_ss,G_st,G_tt"
    assert len(lines) == 7
