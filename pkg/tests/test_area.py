import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confgeo import curves, registry
from confgeo.area import (DEFAULT_EPS, boundary_length, curve_length, cutoff_area,
                          first_variation, renormalized_area)
from confgeo.geodesic import GeometryError
from confgeo.surface import HemisphereSurface, surface_jet

FLAT2 = registry.flat(2)


def _unit_normal(j):
    return np.array([-j.d1[1], j.d1[0]]) / np.linalg.norm(j.d1)


@pytest.fixture(scope="module")
def strip():
    return surface_jet(FLAT2, curves.line(), resolution=64)


@pytest.mark.parametrize("eps", [1e-3, 5e-3, 1e-2])
def test_strip_cutoff_area_closed_form(strip, eps):
    T = 0.25
    assert cutoff_area(strip, eps, T) == pytest.approx(2 * (1 / eps - 1 / T), rel=1e-9)
    assert boundary_length(strip, eps, T) == pytest.approx(2 / eps, rel=1e-12)


def test_strip_renormalized_area(strip):
    rep = renormalized_area(strip, T=0.25)
    assert rep.renormalized == pytest.approx(-8.0, abs=1e-8)
    assert rep.c_minus1 == pytest.approx(2.0, rel=1e-10)
    assert rep.curve_length == pytest.approx(2.0) and rep.capped


@pytest.mark.parametrize("eps", [1e-3, 1e-2, 0.1])
def test_hemisphere_cutoff_area(eps):
    A = cutoff_area(HemisphereSurface(), eps, 1.0, (16, 24))
    assert A == pytest.approx(2 * np.pi * (1 / eps - 1), rel=1e-8)


def test_hemisphere_renormalized_area():
    h = HemisphereSurface()
    rep = renormalized_area(h, DEFAULT_EPS, 1.0, (16, 24))
    assert abs(rep.renormalized + 2 * np.pi) < 1e-6
    assert rep.c_minus1 / (2 * np.pi) == pytest.approx(1, rel=1e-8)
    assert not rep.capped
    half = renormalized_area(h, np.logspace(-3, -2, 5), 1.0, (16, 24))
    assert abs(half.renormalized / rep.renormalized - 1) < 5e-3


def test_circle_jet_divergence_matches_length():
    j = surface_jet(FLAT2, curves.circle(), resolution=64)
    rep = renormalized_area(j, T=0.25, resolution=(32, 24))
    assert rep.c_minus1 == pytest.approx(2 * np.pi, rel=1e-2)
    assert rep.curve_length == pytest.approx(2 * np.pi, rel=1e-12)


def test_area_report_json(tmp_path, strip):
    rep = renormalized_area(strip, T=0.25)
    data = json.loads(rep.to_json(tmp_path / "a.json"))
    assert data == json.loads((tmp_path / "a.json").read_text())
    assert {"renormalized", "c_minus1", "eps", "area", "length"} <= set(data)


def test_first_variation_examples():
    c = curves.circle()
    j0 = surface_jet(FLAT2, c, resolution=64)
    assert first_variation(j0, _unit_normal) == 0.0
    j = surface_jet(FLAT2, c, neumann=_unit_normal, resolution=64)
    assert first_variation(j, _unit_normal) == pytest.approx(-2 * np.pi, rel=1e-12)
    with pytest.raises(GeometryError):
        first_variation(j, lambda jet: jet.d1)


@settings(max_examples=15)
@given(st.floats(-2, 2), st.floats(-2, 2), st.integers(1, 4))
def test_first_variation_is_linear(a, b, k):
    j = surface_jet(FLAT2, curves.circle(), neumann=_unit_normal, resolution=64)
    f = lambda jet: np.cos(k * jet.s) * _unit_normal(jet)
    g = lambda jet: np.sin(k * jet.s) * _unit_normal(jet)
    lhs = first_variation(j, lambda jet: a * f(jet) + b * g(jet))
    rhs = a * first_variation(j, f) + b * first_variation(j, g)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    # orthogonality of Fourier modes against the constant Neumann datum
    assert abs(first_variation(j, f)) < 1e-12


def test_curve_length_open_and_closed(strip):
    assert curve_length(strip) == pytest.approx(2.0, rel=1e-12)
    assert curve_length(surface_jet(FLAT2, curves.circle(radius=3), resolution=64)) == \
        pytest.approx(6 * np.pi)


def test_cutoff_area_rejects_bad_cutoff(strip):
    with pytest.raises(GeometryError):
        cutoff_area(strip, 0.0, 0.25)
    with pytest.raises(GeometryError):
        cutoff_area(strip, 0.3, 0.25)
