r"""Truncated Poincaré–Einstein and ambient metrics over a representative ``h``.

Poincaré–Einstein, coordinates ``(x, y)`` on ``X × (0, x_max)``::

    g = x⁻² (dx² + h - x² P)

Ambient, coordinates ``(σ, ρ, y)``::

    g_M = -2ρ dσ² - 2σ dσ dρ + σ² (h - 2ρ P)

Higher-order tails are set to zero.  With ``σ = l/x`` and ``ρ = x²/2`` the
ambient metric becomes ``-dl² + (l²/x²)(dx² + h - x²P)`` exactly.

Derivatives of both metrics are semi-analytic: the dependence on ``x`` (or
``σ``, ``ρ``) is differentiated by hand, the dependence on ``y`` goes through
the boundary metric's derivative closures.  ``∂P`` is taken by fourth-order
finite differences of the Schouten closure when no derivative closure exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fd
from .metric import GeometryError, MetricField, curvature

__all__ = ["ValidityError", "PoincarePoint", "AmbientPoint", "X_MAX", "pe_metric", "pe_field",
           "ambient_metric", "ambient_field", "poincare_to_ambient", "ambient_to_poincare",
           "einstein_residual", "ricci_norm"]

X_MAX = 0.5
P_STEP = 1e-3


class ValidityError(GeometryError):
    """Query outside the domain where the truncated expansion is a metric."""


@dataclass(frozen=True)
class PoincarePoint:
    x: float
    y: np.ndarray

    def __post_init__(self):
        if not self.x > 0:
            raise ValidityError(f"x must be positive, got {self.x}")
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    def array(self):
        return np.concatenate([[self.x], self.y])


@dataclass(frozen=True)
class AmbientPoint:
    sigma: float
    rho: float
    y: np.ndarray

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidityError(f"σ must be positive, got {self.sigma}")
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    def array(self):
        return np.concatenate([[self.sigma, self.rho], self.y])


def _schouten_jet(m: MetricField, y, order=2):
    """``P``, ``∂P`` and optionally ``∂∂P`` at ``y``."""
    f = m.schouten
    P = f(y)
    dP = fd.jacobian(f, y, P_STEP, 4)
    if order == 1:
        return P, dP
    return P, dP, fd.hessian(f, y, P_STEP, 4, f0=P)


def _check_pd(A, what):
    try:
        np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise ValidityError(f"{what} is not positive definite") from None


def pe_metric(m: MetricField, p: PoincarePoint, x_max: float = X_MAX) -> np.ndarray:
    if p.x > x_max:
        raise ValidityError(f"x = {p.x} exceeds x_max = {x_max}")
    h = m.at(p.y)
    hx = h - p.x**2 * m.schouten(p.y)
    _check_pd(hx, "h - x²P")
    n = m.dim
    g = np.zeros((n + 1, n + 1))
    g[0, 0] = 1.0
    g[1:, 1:] = hx
    return g / p.x**2


def _pe_derivs(m: MetricField, q: np.ndarray, order: int = 2):
    x, y = q[0], q[1:]
    n = m.dim
    N = n + 1
    if order == 1:
        h, dh = m.derivatives(y, order=1)
        P, dP = _schouten_jet(m, y, order=1)
        ddh = np.zeros((n,) * 4)
        ddP = ddh
    else:
        h, dh, ddh = m.derivatives(y)
        P, dP, ddP = _schouten_jet(m, y)
    B = h - x**2 * P
    dB_y = dh - x**2 * dP
    ddB_y = ddh - x**2 * ddP
    g = np.zeros((N, N))
    g[0, 0] = 1.0
    g[1:, 1:] = B
    # g = x⁻² G with G block-diagonal
    dG = np.zeros((N, N, N))
    dG[0, 1:, 1:] = -2 * x * P
    dG[1:, 1:, 1:] = dB_y
    ddG = np.zeros((N, N, N, N))
    ddG[0, 0, 1:, 1:] = -2 * P
    ddG[0, 1:, 1:, 1:] = -2 * x * dP
    ddG[1:, 0, 1:, 1:] = -2 * x * dP
    ddG[1:, 1:, 1:, 1:] = ddB_y
    w, dw, ddw = x**-2, -2 * x**-3, 6 * x**-4
    e0 = np.zeros(N)
    e0[0] = 1.0
    dg = w * dG
    dg += dw * np.einsum("k,ij->kij", e0, g)
    ddg = w * ddG
    ddg += dw * (np.einsum("k,lij->klij", e0, dG) + np.einsum("l,kij->klij", e0, dG))
    ddg += ddw * np.einsum("k,l,ij->klij", e0, e0, g)
    return w * g, dg, ddg


def pe_field(m: MetricField, x_max: float = X_MAX) -> MetricField:
    """The Poincaré–Einstein metric as a MetricField on ``(x, y)``."""

    def ev(q):
        return pe_metric(m, PoincarePoint(q[0], q[1:]), x_max)

    return MetricField(dim=m.dim + 1, eval=ev,
                       d1=lambda q: _pe_derivs(m, q, 1)[1], d2=lambda q: _pe_derivs(m, q)[2],
                       name=f"pe[{m.name}]", params={"x_max": x_max})


def ambient_metric(m: MetricField, a: AmbientPoint) -> np.ndarray:
    h = m.at(a.y)
    B = h - 2 * a.rho * m.schouten(a.y)
    if abs(np.linalg.det(B)) < 1e-14 * max(1.0, np.max(np.abs(B))) ** m.dim:
        raise ValidityError("h - 2ρP is degenerate")
    n = m.dim
    g = np.zeros((n + 2, n + 2))
    g[0, 0] = -2 * a.rho
    g[0, 1] = g[1, 0] = -a.sigma
    g[2:, 2:] = a.sigma**2 * B
    return g


def _ambient_derivs(m: MetricField, q: np.ndarray, order: int = 2):
    s, r, y = q[0], q[1], q[2:]
    n = m.dim
    N = n + 2
    if order == 1:
        h, dh = m.derivatives(y, order=1)
        P, dP = _schouten_jet(m, y, order=1)
        ddh = ddP = np.zeros((n,) * 4)
    else:
        h, dh, ddh = m.derivatives(y)
        P, dP, ddP = _schouten_jet(m, y)
    B = h - 2 * r * P
    dg = np.zeros((N, N, N))
    dg[0, 0, 1] = dg[0, 1, 0] = -1.0
    dg[1, 0, 0] = -2.0
    dg[0, 2:, 2:] = 2 * s * B
    dg[1, 2:, 2:] = -2 * s**2 * P
    dg[2:, 2:, 2:] = s**2 * (dh - 2 * r * dP)
    ddg = np.zeros((N, N, N, N))
    ddg[0, 0, 2:, 2:] = 2 * B
    ddg[0, 1, 2:, 2:] = ddg[1, 0, 2:, 2:] = -4 * s * P
    ddg[0, 2:, 2:, 2:] = ddg[2:, 0, 2:, 2:] = 2 * s * (dh - 2 * r * dP)
    ddg[1, 2:, 2:, 2:] = ddg[2:, 1, 2:, 2:] = -2 * s**2 * dP
    ddg[2:, 2:, 2:, 2:] = s**2 * (ddh - 2 * r * ddP)
    return dg, ddg


def ambient_field(m: MetricField) -> MetricField:
    """The ambient metric as a (Lorentzian) MetricField on ``(σ, ρ, y)``."""

    def ev(q):
        return ambient_metric(m, AmbientPoint(q[0], q[1], q[2:]))

    return MetricField(dim=m.dim + 2, eval=ev,
                       d1=lambda q: _ambient_derivs(m, q, 1)[0], d2=lambda q: _ambient_derivs(m, q)[1],
                       name=f"ambient[{m.name}]")


def poincare_to_ambient(p: PoincarePoint, l: float = 1.0) -> AmbientPoint:
    return AmbientPoint(l / p.x, 0.5 * p.x**2, p.y.copy())


def ambient_to_poincare(a: AmbientPoint) -> tuple[PoincarePoint, float]:
    if not a.rho > 0:
        raise ValidityError(f"ρ must be positive, got {a.rho}")
    x = np.sqrt(2 * a.rho)
    return PoincarePoint(x, a.y.copy()), a.sigma * x


def ricci_norm(g: MetricField, q, shift: float = 0.0) -> float:
    """``‖Ric(g) + shift·g‖_g`` at ``q`` (full contraction with ``g⁻¹``)."""
    c = curvature(g, q)
    E = c.ricci + shift * g.at(q)
    gi = g.inverse(q)
    return float(np.sqrt(abs(np.einsum("ia,jb,ij,ab", gi, gi, E, E))))


def einstein_residual(m: MetricField, p: PoincarePoint, x_max: float = X_MAX) -> float:
    """``‖Ric(g) + n g‖_g`` of the truncated Poincaré–Einstein metric."""
    return ricci_norm(pe_field(m, x_max), p.array(), shift=float(m.dim))
