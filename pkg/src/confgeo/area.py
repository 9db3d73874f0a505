r"""Cutoff areas, boundary lengths and the renormalized area.

For a surface ``X(s, t)`` the region ``Σ_ε = {x(s,t) ≥ ε, t ≤ T}`` is integrated
in ``log t`` with Gauss–Legendre nodes; closed curves use the periodic
trapezoid rule in ``s``, open ones Gauss–Legendre.  The finite part of
``A(ε) - L(ε)`` is extracted by a linear fit in ``ε``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .geodesic import GeometryError
from .surface import Surface, SurfaceJet, SurfacePoint, induced_metric

__all__ = ["QuadratureError", "ExtractionError", "AreaReport", "cutoff_area", "boundary_length",
           "renormalized_area", "curve_length", "first_variation", "BlendedSurface",
           "DEFAULT_EPS"]

DEFAULT_EPS = np.logspace(-3, -2, 10)


class QuadratureError(GeometryError):
    pass


class ExtractionError(GeometryError):
    pass


def _s_nodes(surf: Surface, n: int):
    a, b = surf.s_range
    if surf.period is not None:
        s = a + surf.period * np.arange(n) / n
        return s, np.full(n, surf.period / n)
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def _cutoff_t(surf: Surface, s: float, eps: float, T: float) -> float:
    """Smallest ``t`` with ``x(s, t) = ε``."""
    f = lambda t: surf.point(s, t).X[0] - eps
    lo = eps * 1e-3
    if f(T) < 0:
        raise GeometryError(f"x(s, T) is below ε = {eps} at s = {s}")
    return brentq(f, lo, T, xtol=1e-15, rtol=1e-15)


def _area_once(surf, eps, T, ns, nt):
    s_nodes, s_w = _s_nodes(surf, ns)
    u, wu = np.polynomial.legendre.leggauss(nt)
    total = 0.0
    for s, ws in zip(s_nodes, s_w):
        t0 = _cutoff_t(surf, s, eps, T)
        # integrate piecewise between the surface's non-smooth points
        edges = [t0] + [b for b in getattr(surf, "t_breaks", ()) if t0 < b < T] + [T]
        for lo, hi in zip(edges[:-1], edges[1:]):
            a, b = np.log(lo), np.log(hi)
            ts = np.exp(0.5 * (b - a) * u + 0.5 * (a + b))
            dens = np.array([np.sqrt(np.linalg.det(induced_metric(surf, s, t))) for t in ts])
            total += ws * 0.5 * (b - a) * float(np.sum(wu * ts * dens))
    return total


def cutoff_area(surf: Surface, eps: float, T: float, resolution=(64, 24), rtol: float = 1e-7,
                check: bool = True) -> float:
    """Area of ``Σ ∩ {x ≥ ε, t ≤ T}``.

    With ``check`` the result is compared against a doubled resolution and
    :class:`QuadratureError` is raised on disagreement beyond ``rtol``.
    """
    if not 0 < eps:
        raise GeometryError("ε must be positive")
    ns, nt = resolution
    A = _area_once(surf, eps, T, ns, nt)
    if check:
        A2 = _area_once(surf, eps, T, 2 * ns, 2 * nt)
        if abs(A2 - A) > rtol * max(1.0, abs(A2)):
            raise QuadratureError(f"area quadrature not converged: {A} vs {A2}")
        return A2
    return A


def boundary_length(surf: Surface, eps: float, T: float, ns: int = 64) -> float:
    """Induced length of the level curve ``x(s, t) = ε``."""
    s_nodes, s_w = _s_nodes(surf, ns)
    total = 0.0
    for s, ws in zip(s_nodes, s_w):
        t0 = _cutoff_t(surf, s, eps, T)
        pt = surf.point(s, t0)
        G = induced_metric(surf, s, t0, pt)
        dt = -pt.Xs[0] / pt.Xt[0]
        w = np.array([1.0, dt])
        total += ws * np.sqrt(float(w @ G @ w))
    return total


def curve_length(jet: SurfaceJet) -> float:
    """Length of the boundary curve ``∫|γ̇| ds``."""
    if jet.period is not None:
        return float(np.sum(jet.x1) * jet.period / jet.x1.size)
    return float(simpson(jet.x1, x=jet.s))


@dataclass
class AreaReport:
    eps: list
    area: list
    length: list
    c_minus1: float
    c0: float
    c1: float
    renormalized: float
    slope_eps: float
    fit_residual: float
    T: float
    capped: bool
    curve_length: float | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            p = Path(path)
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text + "\n")
        return text


def renormalized_area(surf: Surface, eps=None, T: float | None = None, resolution=(64, 24),
                      max_residual: float = 1e-6, check: bool = True) -> AreaReport:
    """Fit ``A(ε) = c₋₁/ε + c₀ + c₁ε`` and ``A(ε) - L(ε) = 𝒜 + d₁ε``."""
    eps = DEFAULT_EPS if eps is None else np.asarray(eps, dtype=float)
    if T is None:
        T = 0.5 * getattr(surf, "x_max", 0.5)
    A = np.array([cutoff_area(surf, e, T, resolution, check=check) for e in eps])
    L = np.array([boundary_length(surf, e, T, 2 * resolution[0]) for e in eps])
    M = np.column_stack([1 / eps, np.ones_like(eps), eps])
    c, *_ = np.linalg.lstsq(M, A, rcond=None)
    M2 = np.column_stack([np.ones_like(eps), eps])
    d, *_ = np.linalg.lstsq(M2, A - L, rcond=None)
    r = A - L - M2 @ d
    res = float(np.sqrt(np.mean(r * r)))
    if res > max_residual * max(1.0, abs(d[0])):
        raise ExtractionError(f"A - L is not linear in ε (rms residual {res:.3e})")
    ell = curve_length(surf) if isinstance(surf, SurfaceJet) else None
    return AreaReport(list(map(float, eps)), list(map(float, A)), list(map(float, L)),
                      float(c[0]), float(c[1]), float(c[2]), float(d[0]), float(d[1]), res,
                      float(T), surf.period is None, ell)


def _grid_field(jet: SurfaceJet, spec, what):
    n = jet.dim
    if callable(spec):
        from .curves import CurveJet
        vals = [spec(CurveJet(float(s), g, u, None, None))
                for s, g, u in zip(jet.s, jet.gamma, jet.velocity)]
        arr = np.array(vals, dtype=float)
    else:
        arr = np.asarray(spec, dtype=float)
        if arr.shape == (n,):
            arr = np.broadcast_to(arr, jet.gamma.shape)
    if arr.shape != jet.gamma.shape:
        raise GeometryError(f"{what} must have one vector per grid sample")
    return arr


def first_variation(jet: SurfaceJet, phi) -> float:
    """Boundary-moving variation ``-∫ |γ̇|⁻² h(φ, n) ds`` of the renormalized area."""
    phi = _grid_field(jet, phi, "φ")
    hs = [jet.metric.at(g) for g in jet.gamma]
    vals = []
    for u, p, nn, h in zip(jet.velocity, phi, jet.neumann, hs):
        q = float(u @ h @ u)
        if abs(float(u @ h @ p)) > 1e-10 * max(1.0, np.sqrt(q * float(p @ h @ p))):
            raise GeometryError("φ is not normal to the curve")
        vals.append(-float(p @ h @ nn) / q)
    vals = np.array(vals)
    if jet.period is not None:
        return float(np.sum(vals) * jet.period / vals.size)
    return float(simpson(vals, x=jet.s))


def _smoothstep(t, t0, t1):
    """1 below ``t0``, 0 above ``t1``, C² in between; returns (χ, χ')."""
    if t <= t0:
        return 1.0, 0.0
    if t >= t1:
        return 0.0, 0.0
    z = (t - t0) / (t1 - t0)
    p = 1 - z**3 * (10 - 15 * z + 6 * z * z)
    dp = -30 * z * z * (1 - z) ** 2 / (t1 - t0)
    return p, dp


class BlendedSurface(Surface):
    """``X₀ + χ(t)(X₁ - X₀)``: follows ``other`` near the boundary and ``base`` beyond ``t1``."""

    def __init__(self, base: Surface, other: Surface, t0: float = 0.02, t1: float = 0.05):
        self.base, self.other = base, other
        self.g = base.g
        self.s_range = base.s_range
        self.period = base.period
        self.x_max = getattr(base, "x_max", 0.5)
        self.t0, self.t1 = t0, t1
        self.t_breaks = (t0, t1)

    def point(self, s, t, second=False):
        if second:
            raise NotImplementedError("blended surfaces carry first derivatives only")
        p0 = self.base.point(s, t)
        chi, dchi = _smoothstep(t, self.t0, self.t1)
        if chi == 0.0:
            return p0
        p1 = self.other.point(s, t)
        d = p1.X - p0.X
        return SurfacePoint(p0.X + chi * d, p0.Xs + chi * (p1.Xs - p0.Xs),
                            p0.Xt + chi * (p1.Xt - p0.Xt) + dchi * d)
