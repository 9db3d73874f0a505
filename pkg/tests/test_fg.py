import numpy as np
import pytest
from hypothesis import given, strategies as st

from confgeo import fd, registry
from confgeo.fg import (AmbientPoint, PoincarePoint, ValidityError, ambient_field, ambient_metric,
                        ambient_to_poincare, einstein_residual, pe_field, pe_metric,
                        poincare_to_ambient, ricci_norm)
from confgeo.slopes import decay_order

EQ3 = np.array([np.pi / 2, np.pi / 2, 0.0])     # h = I on the round S³ chart


def test_pe_metric_flat():
    g = pe_metric(registry.flat(2), PoincarePoint(0.5, [0.0, 0.0]))
    assert np.allclose(g, 4 * np.eye(3))


def test_pe_metric_sphere():
    g = pe_metric(registry.round_sphere(3), PoincarePoint(0.2, EQ3))
    assert g[0, 0] == pytest.approx(25.0)
    assert np.allclose(np.diag(g)[1:], 24.5)
    assert np.allclose(g - np.diag(np.diag(g)), 0)


def test_pe_metric_validity():
    m = registry.flat(2)
    with pytest.raises(ValidityError):
        pe_metric(m, PoincarePoint(0.6, [0.0, 0.0]))
    with pytest.raises(ValidityError):
        PoincarePoint(0.0, [0.0, 0.0])
    with pytest.raises(ValidityError):
        pe_metric(registry.round_sphere(3), PoincarePoint(1.5, EQ3), x_max=2.0)   # 1 - x²/2 < 0


def test_flat_boundary_gives_hyperbolic_space():
    assert einstein_residual(registry.flat(3), PoincarePoint(0.3, [0.1, 0.2, -0.3])) < 1e-8


def test_sphere_einstein_residual_decays():
    m = registry.round_sphere(3)
    xs = np.logspace(-2, np.log10(0.3), 8)
    r = np.array([einstein_residual(m, PoincarePoint(x, EQ3 + 0.1)) for x in xs])
    assert decay_order(xs, r, min_decades=1.0).slope >= 2


def test_ambient_metric_examples():
    m = registry.flat(2)
    g = ambient_metric(m, AmbientPoint(2.0, 0.0, [0.0, 0.0]))
    expected = np.array([[0, -2, 0, 0], [-2, 0, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]], float)
    assert np.allclose(g, expected)
    s = ambient_metric(registry.round_sphere(3), AmbientPoint(1.0, 0.05, EQ3))
    assert np.allclose(s[2:, 2:], 0.95 * np.eye(3))
    assert s[0, 0] == pytest.approx(-0.1) and s[0, 1] == pytest.approx(-1.0)


def test_flat_ambient_is_ricci_flat():
    g = ambient_field(registry.flat(2))
    assert ricci_norm(g, np.array([1.3, 0.2, 0.4, -0.1])) < 1e-10


def test_coordinate_maps():
    a = poincare_to_ambient(PoincarePoint(0.4, [0.0, 0.0]))
    assert a.sigma == pytest.approx(2.5) and a.rho == pytest.approx(0.08)
    p, l = ambient_to_poincare(a)
    assert p.x == pytest.approx(0.4) and l == pytest.approx(1.0)
    with pytest.raises(ValidityError):
        ambient_to_poincare(AmbientPoint(1.0, 0.0, [0.0]))
    with pytest.raises(ValidityError):
        AmbientPoint(-1.0, 0.1, [0.0])


def test_coordinate_round_trip_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        x, l = rng.uniform(1e-3, 0.5), rng.uniform(0.1, 10)
        y = rng.normal(size=3)
        p, l2 = ambient_to_poincare(poincare_to_ambient(PoincarePoint(x, y), l))
        assert abs(p.x - x) <= 1e-14 * max(1, x) and abs(l2 - l) <= 1e-14 * l
        assert np.array_equal(p.y, y)


@given(st.floats(0.05, 0.45), st.floats(0.2, 5.0))
def test_ambient_pullback_is_cone_over_pe(x, l):
    # in (l, x, y): g_M = -dl² + l² g_PE
    m = registry.round_sphere(3)
    y = EQ3 + 0.2
    a = poincare_to_ambient(PoincarePoint(x, y), l)
    J = np.zeros((5, 5))                 # ∂(σ, ρ, y)/∂(l, x, y)
    J[0, 0], J[0, 1], J[1, 1] = 1 / x, -l / x**2, x
    J[2:, 2:] = np.eye(3)
    pulled = J.T @ ambient_metric(m, a) @ J
    expected = np.zeros((5, 5))
    expected[0, 0] = -1
    expected[1:, 1:] = l**2 * pe_metric(m, PoincarePoint(x, y))
    assert np.allclose(pulled, expected, rtol=1e-12, atol=1e-10)


@given(st.floats(0.5, 3.0), st.floats(1e-3, 0.2))
def test_ambient_sigma_homogeneity(s, rho):
    m = registry.conformally_flat(2, "gaussian")
    g1 = ambient_metric(m, AmbientPoint(s, rho, [0.2, -0.1]))
    g2 = ambient_metric(m, AmbientPoint(2 * s, rho, [0.2, -0.1]))
    assert np.allclose(g2[2:, 2:], 4 * g1[2:, 2:])
    assert np.allclose(g2[0, 1], 2 * g1[0, 1])


@pytest.mark.parametrize("kind", ["pe", "ambient"])
def test_semi_analytic_derivatives_match_finite_differences(kind):
    m = registry.round_sphere(3)
    if kind == "pe":
        g, q = pe_field(m), np.concatenate([[0.3], EQ3 + 0.1])
    else:
        g, q = ambient_field(m), np.concatenate([[1.5, 0.04], EQ3 + 0.1])
    _, dg, ddg = g.derivatives(q)
    f = lambda p: g.at(p).ravel()
    N = q.size
    dfd = fd.jacobian(f, q, 1e-4, 4).reshape(N, N, N)
    assert np.allclose(dg, dfd, atol=1e-7)
    ddfd = fd.hessian(f, q, 1e-3, 4).reshape(N, N, N, N)
    assert np.allclose(ddg, ddfd, atol=1e-5)
