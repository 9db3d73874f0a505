"""Parametrised curves: analytic closures and curves rebuilt from trajectory samples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from scipy.optimize import brentq

from .interp import local_derivatives

__all__ = ["CurveJet", "VState", "Curve", "AnalyticCurve", "SampledCurve", "sympy_curve",
           "line", "circle", "conformal_circle", "parabola", "polar_great_circle",
           "perturbed"]


@dataclass(frozen=True)
class CurveJet:
    """Coordinate derivatives of a curve at one parameter value."""

    s: float
    gamma: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    @property
    def dim(self) -> int:
        return self.gamma.size


@dataclass(frozen=True)
class VState:
    """State ``(γ, γ̇, v)`` of the auxiliary-field system; ``vdot`` is the
    coordinate derivative of ``v`` when known."""

    s: float
    gamma: np.ndarray
    velocity: np.ndarray
    v: np.ndarray
    vdot: np.ndarray | None = None


class Curve:
    """Interface: ``jet(s)`` plus the parameter domain."""

    s_range: tuple[float, float]
    period: float | None = None
    name: str = ""

    def jet(self, s: float) -> CurveJet:  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def closed(self) -> bool:
        return self.period is not None

    def __call__(self, s):
        return self.jet(s).gamma


class AnalyticCurve(Curve):
    def __init__(self, derivs: Callable[[float], Sequence[np.ndarray]], s_range, period=None,
                 name=""):
        self._derivs = derivs
        self.s_range = (float(s_range[0]), float(s_range[1]))
        self.period = period
        self.name = name

    def jet(self, s: float) -> CurveJet:
        g, d1, d2, d3 = (np.asarray(a, dtype=float) for a in self._derivs(float(s)))
        return CurveJet(float(s), g, d1, d2, d3)


def sympy_curve(exprs, s: sp.Symbol, s_range, period=None, name="") -> AnalyticCurve:
    """Curve from sympy expressions in ``s``; derivatives are exact."""
    exprs = [sp.sympify(e) for e in exprs]
    rows = [[sp.diff(e, s, k) for e in exprs] for k in range(4)]
    f = sp.lambdify(s, rows, modules="numpy")

    def derivs(x):
        out = np.asarray(f(x), dtype=float)
        return out[0], out[1], out[2], out[3]

    return AnalyticCurve(derivs, s_range, period, name)


class SampledCurve(Curve):
    """Curve known through uniform samples of ``γ`` and ``γ̇``.

    ``γ̈`` and ``γ⃛`` are derivatives of the local interpolant of ``γ̇``.
    """

    def __init__(self, s, gamma, velocity, period=None, name=""):
        self.grid = np.asarray(s, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        self.velocity = np.asarray(velocity, dtype=float)
        self.s_range = (float(self.grid[0]), float(self.grid[-1]))
        self.period = period
        self.name = name

    def jet(self, s: float) -> CurveJet:
        g = local_derivatives(self.grid, self.gamma, s, nder=0, period=self.period)[0]
        dv = local_derivatives(self.grid, self.velocity, s, nder=2, period=self.period)
        return CurveJet(float(s), g, dv[0], dv[1], dv[2])


_s = sp.Symbol("s", real=True)


def line(point=(0.0, 0.0), direction=(1.0, 0.0), speed=1.0, s_range=(-1.0, 1.0)) -> AnalyticCurve:
    p = [sp.nsimplify(c) for c in point]
    d = sp.Matrix([sp.nsimplify(c) for c in direction])
    d = d / sp.sqrt((d.T * d)[0, 0])
    exprs = [p[i] + sp.nsimplify(speed) * d[i] * _s for i in range(len(p))]
    return sympy_curve(exprs, _s, s_range, name="line")


def circle(radius=1.0, centre=(0.0, 0.0), speed=1.0, dim=2) -> AnalyticCurve:
    """Circle in the first two coordinates, constant coordinate speed."""
    r = sp.nsimplify(radius)
    w = sp.nsimplify(speed) / r
    exprs = [sp.nsimplify(centre[0]) + r * sp.cos(w * _s), sp.nsimplify(centre[1]) + r * sp.sin(w * _s)]
    exprs += [sp.Integer(0)] * (dim - 2)
    period = float(2 * sp.pi / w)
    return sympy_curve(exprs, _s, (0.0, period), period=period, name="circle")


def conformal_circle(dim=2) -> AnalyticCurve:
    """Unit circle with angle ``2 arctan(s/2)``: a conformally parametrised circle
    in flat space through (1, 0) with unit initial speed."""
    th = 2 * sp.atan(_s / 2)
    exprs = [sp.cos(th), sp.sin(th)] + [sp.Integer(0)] * (dim - 2)
    return sympy_curve(exprs, _s, (-4.0, 4.0), name="conformal-circle")


def parabola(a=0.5) -> AnalyticCurve:
    """``(u, a u²)`` reparametrised by Euclidean arc length ``s`` (``s = 0`` at ``u = 0``)."""
    a = float(a)

    def arclen(u):
        w = 2 * a * u
        return (w * np.sqrt(1 + w * w) + np.arcsinh(w)) / (4 * a)

    def derivs(s):
        u = brentq(lambda x: arclen(x) - s, -1e3, 1e3, xtol=1e-15, rtol=1e-15)
        # unit tangent T(u) = (1, 2au)/w, d/ds = (1/w) d/du
        k = 2 * a
        w = np.sqrt(1 + (k * u) ** 2)
        g = np.array([u, a * u * u])
        T = np.array([1.0, k * u]) / w
        # dT/du = k(-ku, 1)/w³
        N = np.array([-k * u, 1.0])
        d2 = k * N / w**4
        # d/du [k N w^-4] = k[(-k, 0) w^-4 - 4 k² u N w^-6]
        d3 = k * (np.array([-k, 0.0]) / w**4 - 4 * k * k * u * N / w**6) / w
        return g, T, d2, d3

    return AnalyticCurve(derivs, (-1.0, 1.0), name="parabola")


def polar_great_circle() -> AnalyticCurve:
    """Equatorial great circle ``χ = θ = π/2, φ = s`` in the polar chart of S³."""
    exprs = [sp.pi / 2, sp.pi / 2, _s]
    return sympy_curve(exprs, _s, (0.0, float(2 * sp.pi)), name="great-circle")


def perturbed(base_exprs, offset_exprs, u: float, s_range, period=None, name="") -> AnalyticCurve:
    """``γ + u φ`` for sympy expressions of the base curve and offset field in ``s``."""
    exprs = [sp.sympify(b) + sp.Float(u) * sp.sympify(o) for b, o in zip(base_exprs, offset_exprs)]
    return sympy_curve(exprs, _s, s_range, period, name)


S = _s
