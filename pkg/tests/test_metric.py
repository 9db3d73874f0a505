import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from confgeo import registry
from confgeo.metric import (MetricField, MissingMobiusError, SingularMetricError, christoffel,
                            covariant_derivative_along, curvature, rescaled, scalar_curvature)
from oracles import evaluate, schouten, symbolic_curvature


def test_flat_christoffel_vanishes():
    m = registry.flat(3)
    assert np.all(christoffel(m, [0.3, -1.0, 2.0]) == 0)


def test_conformal_factor_christoffel_against_oracle():
    m = registry.conformally_flat(2, "linear")
    G = christoffel(m, [0.0, 0.0])
    x, y = sp.symbols("x y")
    Gs, *_ = symbolic_curvature(sp.exp(2 * x) * sp.eye(2), [x, y])
    expected = evaluate([[[Gs[k][i][j] for j in range(2)] for i in range(2)] for k in range(2)],
                        [x, y], [0, 0])
    assert np.allclose(G, expected, atol=1e-12)
    assert G[0, 0, 0] == pytest.approx(1.0)
    assert G[0, 1, 1] == pytest.approx(-1.0)
    assert G[1, 0, 1] == pytest.approx(1.0) and G[1, 1, 0] == pytest.approx(1.0)


def test_sphere_christoffel_at_equator():
    m = registry.round_sphere(2)
    G = christoffel(m, [np.pi / 2, 0.0])
    assert abs(G[0, 1, 1]) < 1e-15 and abs(G[1, 0, 1]) < 1e-15


def test_flat_schouten_vanishes():
    assert np.all(np.abs(curvature(registry.flat(3), [1.0, 2.0, 3.0]).schouten) < 1e-14)


def test_unit_sphere_schouten_is_half_metric():
    m = registry.round_sphere(3)
    p = [1.1, 0.7, 0.2]
    c = curvature(m, p)
    assert np.allclose(c.schouten, 0.5 * m.at(p), atol=1e-12)
    assert c.scalar == pytest.approx(6.0)


def test_conformally_flat_schouten_matches_transformation_law():
    m = registry.conformally_flat(3, "linear")
    p = np.zeros(3)
    P = curvature(m, p).schouten
    # P = -∇dφ + dφ⊗dφ - ½|dφ|²δ with φ = x¹ and flat Levi-Civita
    expected = np.diag([1.0, 0.0, 0.0]) - 0.5 * np.eye(3)
    assert np.allclose(P, expected, atol=1e-12)
    assert np.allclose(m.schouten(p), expected, atol=1e-12)


def test_two_dimensional_schouten_needs_mobius_structure():
    m = MetricField(dim=2, eval=lambda p: np.eye(2))
    with pytest.raises(MissingMobiusError):
        curvature(m, [0.0, 0.0])
    assert scalar_curvature(m, [0.0, 0.0]) == 0.0


def test_singular_metric_rejected():
    m = MetricField(dim=2, eval=lambda p: np.zeros((2, 2)), mobius_P0=lambda p: np.zeros((2, 2)))
    with pytest.raises(SingularMetricError):
        christoffel(m, [0.0, 0.0])


def test_covariant_derivative_examples():
    flat = registry.flat(2)
    w, wd = np.array([1.0, 2.0]), np.array([0.3, -0.1])
    assert np.allclose(covariant_derivative_along(flat, [0, 0], [1, 0], w, wd), wd)
    # unit circle, w = γ̇: ∇γ̇ = γ̈ = -γ
    s = 0.4
    g = np.array([np.cos(s), np.sin(s)])
    u = np.array([-np.sin(s), np.cos(s)])
    assert np.allclose(covariant_derivative_along(flat, g, u, u, -g), -g)
    # equator of S² is a geodesic
    sph = registry.round_sphere(2)
    assert np.allclose(covariant_derivative_along(sph, [np.pi / 2, s], [0, 1], [0, 1], [0, 0]), 0,
                       atol=1e-15)


def test_sphere_curvature_matches_symbolic_oracle():
    th, ph = sp.symbols("th ph")
    H = sp.diag(1, sp.sin(th) ** 2)
    _, _, Ric, scal = symbolic_curvature(H, [th, ph])
    m = registry.round_sphere(2)
    p = [0.9, 0.3]
    c = curvature(m, p)
    assert np.allclose(c.ricci, evaluate(Ric, [th, ph], p), atol=1e-12)
    assert c.scalar == pytest.approx(evaluate(scal, [th, ph], p))
    P = schouten(H, Ric, scal, 2)
    assert np.allclose(c.schouten, evaluate(P, [th, ph], p), atol=1e-12)


points3 = st.tuples(st.floats(0.4, 2.7), st.floats(0.4, 2.7), st.floats(-3, 3))


@given(points3)
def test_fd_curvature_agrees_with_analytic(p):
    m = registry.round_sphere(3)
    a = curvature(m, p)
    f = curvature(m.with_fd(step=1e-4, order=2), p)
    assert np.max(np.abs(f.schouten - a.schouten)) / np.max(np.abs(a.schouten)) < 1e-6


@given(points3)
def test_curvature_symmetries(p):
    m = registry.conformally_flat(3, "gaussian")
    c = curvature(m, np.array(p) * 0.3)
    R = c.riemann
    assert np.allclose(R, -np.swapaxes(R, 2, 3), atol=1e-10)
    # first Bianchi identity R^l_kij + R^l_ijk + R^l_jki = 0
    B = R + np.einsum("lijk->lkij", R) + np.einsum("ljki->lkij", R)
    assert np.max(np.abs(B)) < 1e-8
    assert np.allclose(c.ricci, c.ricci.T)
    hinv = np.linalg.inv(m.at(np.array(p) * 0.3))
    assert np.einsum("ij,ij", hinv, c.schouten) == pytest.approx(c.scalar / 4, abs=1e-8)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_christoffel_metric_compatibility(x, y):
    m = registry.conformally_flat(2, "gaussian")
    p = np.array([x, y])
    h, dh = m.derivatives(p, order=1)
    G = christoffel(m, p)
    Gl = np.einsum("il,lkj->ikj", h, G)          # Γ_ikj = h_il Γ^l_kj
    assert np.allclose(dh, np.einsum("ikj->kij", Gl) + np.einsum("jki->kij", Gl), atol=1e-12)


def test_rescaled_metric_and_mobius_transport():
    m = registry.flat(2)
    r = rescaled(m, lambda p: float(np.exp(p[0])))
    c = registry.conformally_flat(2, "linear")
    p = np.array([0.2, -0.4])
    assert np.allclose(r.at(p), c.at(p))
    assert np.allclose(curvature(r, p).schouten, curvature(c, p).schouten, atol=1e-6)
