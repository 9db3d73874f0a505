r"""Conformal representatives on a coordinate patch and their curvature.

A :class:`MetricField` wraps a callable ``p -> h_ij(p)``.  Derivatives come
either from user-supplied closures (``d1``/``d2``) or from central finite
differences with step ``fd_step``.

Index conventions, used everywhere in the package::

    dh[k, i, j]      = ∂_k h_ij
    ddh[k, l, i, j]  = ∂_k ∂_l h_ij
    gamma[k, i, j]   = Γ^k_ij = ½ h^kl (∂_i h_jl + ∂_j h_il - ∂_l h_ij)
    riemann[l, k, i, j] = R^l_kij = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
    ricci[k, j]      = R^i_kij

In dimension two the Schouten tensor is ``(R/4) h + P0`` where ``P0`` is a
user-chosen trace-free tensor (a Möbius structure).  It is never silently
taken to be zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import fd

__all__ = [
    "GeometryError",
    "SingularMetricError",
    "MissingMobiusError",
    "MetricField",
    "CurvatureData",
    "christoffel",
    "christoffel_from_derivs",
    "christoffel_derivative",
    "curvature",
    "scalar_curvature",
    "covariant_derivative_along",
    "rescaled",
]


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class SingularMetricError(GeometryError):
    pass


class MissingMobiusError(GeometryError):
    pass


ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MetricField:
    """A Riemannian representative ``h`` on a coordinate patch.

    ``schouten_fn`` is an optional closed form for the Schouten tensor.  It is
    only used where the Schouten tensor itself has to be differentiated (the
    Poincaré–Einstein and ambient metrics); :func:`curvature` always assembles
    P from the Ricci tensor.
    """

    dim: int
    eval: ArrayFn
    d1: Optional[ArrayFn] = None
    d2: Optional[ArrayFn] = None
    mobius_P0: Optional[ArrayFn] = None
    schouten_fn: Optional[ArrayFn] = None
    fd_step: float | Sequence[float] = 1e-4
    fd_order: int = 2
    name: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise GeometryError("metric dimension must be at least 2")

    @property
    def deriv_mode(self) -> str:
        return "analytic" if self.d1 is not None and self.d2 is not None else "fd"

    def with_fd(self, step=None, order=None) -> "MetricField":
        """Same metric with analytic closures dropped (forces finite differences)."""
        return replace(self, d1=None, d2=None,
                       fd_step=self.fd_step if step is None else step,
                       fd_order=self.fd_order if order is None else order)

    def _point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise GeometryError(f"point has shape {p.shape}, expected ({self.dim},)")
        return p

    def at(self, p) -> np.ndarray:
        return np.asarray(self.eval(self._point(p)), dtype=float)

    def inverse(self, p) -> np.ndarray:
        return _invert(self.at(p))

    def derivatives(self, p, order: int = 2):
        """Return ``(h, dh)`` or ``(h, dh, ddh)`` at ``p``."""
        p = self._point(p)
        h = self.at(p)
        if self.deriv_mode == "analytic":
            dh = np.asarray(self.d1(p), dtype=float)
            if order == 1:
                return h, dh
            return h, dh, np.asarray(self.d2(p), dtype=float)
        dh = fd.jacobian(self.eval, p, self.fd_step, self.fd_order)
        if order == 1:
            return h, dh
        ddh = fd.hessian(self.eval, p, self.fd_step, self.fd_order, f0=h)
        return h, dh, ddh

    def schouten(self, p) -> np.ndarray:
        """Closed-form Schouten tensor when available, else :func:`curvature`."""
        if self.schouten_fn is not None:
            return np.asarray(self.schouten_fn(self._point(p)), dtype=float)
        return curvature(self, p).schouten

    def inner(self, p, a, b) -> float:
        return float(np.asarray(a) @ self.at(p) @ np.asarray(b))

    def norm(self, p, a) -> float:
        return float(np.sqrt(self.inner(p, a, a)))


@dataclass(frozen=True)
class CurvatureData:
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    schouten: np.ndarray


def _invert(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if not np.all(np.isfinite(h)):
        raise SingularMetricError("metric has non-finite components")
    scale = np.max(np.abs(h))
    if scale == 0 or abs(np.linalg.det(h / scale)) < 1e-14:
        raise SingularMetricError("metric is not invertible")
    return np.linalg.inv(h)


def christoffel_from_derivs(hinv: np.ndarray, dh: np.ndarray) -> np.ndarray:
    # S[l, i, j] = ∂_i h_jl + ∂_j h_il - ∂_l h_ij
    S = np.einsum("ijl->lij", dh) + np.einsum("jil->lij", dh) - dh
    return 0.5 * np.einsum("kl,lij->kij", hinv, S)


def christoffel(m: MetricField, p) -> np.ndarray:
    """Levi-Civita connection coefficients ``Γ[k, i, j]`` at ``p``."""
    h, dh = m.derivatives(p, order=1)
    return christoffel_from_derivs(_invert(h), dh)


def christoffel_derivative(hinv, dh, ddh) -> np.ndarray:
    """``dG[m, k, i, j] = ∂_m Γ^k_ij`` from metric derivatives."""
    S = np.einsum("ijl->lij", dh) + np.einsum("jil->lij", dh) - dh
    dS = (np.einsum("mijl->mlij", ddh) + np.einsum("mjil->mlij", ddh) - ddh)
    dhinv = -np.einsum("ka,mab,bl->mkl", hinv, dh, hinv)
    return 0.5 * (np.einsum("mkl,lij->mkij", dhinv, S) + np.einsum("kl,mlij->mkij", hinv, dS))


def _riemann(G, dG):
    # R^l_kij = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
    term = np.einsum("iljk->lkij", dG)
    quad = np.einsum("lim,mjk->lkij", G, G)
    return term - np.swapaxes(term, 2, 3) + quad - np.swapaxes(quad, 2, 3)


def schouten_from_ricci(h, ricci, scalar, P0=None):
    n = h.shape[0]
    if n == 2:
        if P0 is None:
            raise MissingMobiusError(
                "two-dimensional Schouten tensor needs a Möbius structure (mobius_P0)")
        return 0.25 * scalar * h + np.asarray(P0, dtype=float)
    return (ricci - scalar * h / (2.0 * (n - 1))) / (n - 2)


def curvature(m: MetricField, p) -> CurvatureData:
    p = m._point(p)
    if m.dim == 2 and m.mobius_P0 is None:
        raise MissingMobiusError(
            "two-dimensional Schouten tensor needs a Möbius structure (mobius_P0)")
    h, dh, ddh = m.derivatives(p)
    hinv = _invert(h)
    G = christoffel_from_derivs(hinv, dh)
    dG = christoffel_derivative(hinv, dh, ddh)
    R = _riemann(G, dG)
    ric = np.einsum("ikij->kj", R)
    ric = 0.5 * (ric + ric.T)
    scal = float(np.einsum("ij,ij", hinv, ric))
    P0 = m.mobius_P0(p) if m.dim == 2 else None
    P = schouten_from_ricci(h, ric, scal, P0)
    return CurvatureData(G, R, ric, scal, P)


def scalar_curvature(m: MetricField, p) -> float:
    """Scalar curvature alone; needs no Möbius structure in dimension two."""
    p = m._point(p)
    h, dh, ddh = m.derivatives(p)
    hinv = _invert(h)
    R = _riemann(christoffel_from_derivs(hinv, dh), christoffel_derivative(hinv, dh, ddh))
    return float(np.einsum("kj,ikij", hinv, R))


def covariant_derivative_along(m: MetricField, point, velocity, w, wdot) -> np.ndarray:
    """``∇_γ̇ w = ẇ + Γ(γ̇, w)`` for a field ``w`` along a curve."""
    velocity = np.asarray(velocity, dtype=float)
    w = np.asarray(w, dtype=float)
    wdot = np.asarray(wdot, dtype=float)
    if not (velocity.shape == w.shape == wdot.shape == (m.dim,)):
        raise GeometryError("dimension mismatch in covariant derivative")
    G = christoffel(m, point)
    return wdot + np.einsum("kij,i,j->k", G, velocity, w)


def trace_free(A: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    return A - np.einsum("ij,ij", np.linalg.inv(h), A) / n * h


def rescaled(m: MetricField, omega: Callable[[np.ndarray], float],
             step: float | None = None) -> MetricField:
    """The representative ``Ω² h`` (finite-difference mode).

    In dimension two the Möbius tensor is carried along with the trace-free
    part of the Schouten transformation law,
    ``P0 -> tf(P0 - ∇dφ + dφ⊗dφ)`` with ``φ = log Ω``.
    """
    step = m.fd_step if step is None else step

    def _omega(p):
        w = float(omega(p))
        if not w > 0:
            raise GeometryError(f"conformal factor must be positive, got {w} at {p}")
        return w

    def h_new(p):
        return _omega(p) ** 2 * m.at(p)

    P0_new = None
    if m.dim == 2 and m.mobius_P0 is not None:
        def P0_new(p):
            p = np.asarray(p, dtype=float)
            phi = lambda q: np.log(_omega(q))
            dphi = fd.jacobian(phi, p, step, 4)
            ddphi = fd.hessian(phi, p, step, 4)
            G = christoffel(m, p)
            hess = ddphi - np.einsum("kij,k->ij", G, dphi)
            return trace_free(m.mobius_P0(p) - hess + np.outer(dphi, dphi), m.at(p))

    return MetricField(dim=m.dim, eval=h_new, mobius_P0=P0_new, fd_step=step,
                       fd_order=m.fd_order, name=f"{m.name}*Omega^2" if m.name else "")
