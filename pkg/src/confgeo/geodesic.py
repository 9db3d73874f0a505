r"""Conformal geodesic equations.

Two equivalent forms are implemented.  The third-order residual

    F = ∇γ̈ - 3 h(γ̇,γ̈)/|γ̇|² γ̈ + 3/2 |γ̈|²/|γ̇|² γ̇ - |γ̇|² P♯(γ̇) + 2 P(γ̇,γ̇) γ̇

(``γ̈ = ∇_γ̇ γ̇``) and the auxiliary-field system

    v = ∇_γ̇(|γ̇|⁻² γ̇)
    0 = |γ̇|⁻¹ ∇_γ̇(|γ̇| v) + ½|v|² γ̇ - P♯(γ̇)

whose tangential part ``κ = h(γ̇, ·)`` fixes the parametrisation.
Solved for derivatives the system reads

    ∇_γ̇ γ̇ = |γ̇|² v - 2 h(v, γ̇) γ̇
    ∇_γ̇ v = h(v, γ̇) v - ½|v|² γ̇ + P♯(γ̇)

which is what :func:`integrate` steps with classical RK4.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .curves import Curve, CurveJet, SampledCurve, VState
from .metric import (GeometryError, MetricField, christoffel, christoffel_derivative,
                     christoffel_from_derivs, _invert, rescaled)

__all__ = [
    "DegenerateParametrisationError",
    "DEGENERACY_THRESHOLD",
    "CovariantJet",
    "covariant_jet",
    "cge_residual_third_order",
    "split_residual",
    "v_from_jet",
    "nabla_v_from_jet",
    "state_from_jet",
    "kappa",
    "kappa_from_jet",
    "second_eq_residual",
    "Trajectory",
    "integrate",
    "conformal_invariance_gap",
]

DEGENERACY_THRESHOLD = 1e-12


class DegenerateParametrisationError(GeometryError):
    pass


def _check_speed(speed2: float):
    if not speed2 > DEGENERACY_THRESHOLD**2:
        raise DegenerateParametrisationError(
            f"|γ̇| = {np.sqrt(max(speed2, 0.0)):.3e} is below {DEGENERACY_THRESHOLD:g}")


@dataclass(frozen=True)
class CovariantJet:
    """Covariant quantities of a curve at one point."""

    h: np.ndarray
    P: np.ndarray
    G: np.ndarray
    velocity: np.ndarray
    accel: np.ndarray          # ∇_γ̇ γ̇
    jerk: np.ndarray           # ∇_γ̇ ∇_γ̇ γ̇

    def inner(self, a, b):
        return float(a @ self.h @ b)

    @property
    def speed2(self):
        return self.inner(self.velocity, self.velocity)

    def sharp(self, A):
        """``h⁻¹(A(γ̇))`` for a bilinear form ``A``."""
        return np.linalg.solve(self.h, A @ self.velocity)


def covariant_jet(m: MetricField, jet: CurveJet, need_schouten: bool = True) -> CovariantJet:
    p = jet.gamma
    h, dh, ddh = m.derivatives(p)
    hinv = _invert(h)
    G = christoffel_from_derivs(hinv, dh)
    dG = christoffel_derivative(hinv, dh, ddh)
    u, ud, udd = jet.d1, jet.d2, jet.d3
    _check_speed(float(u @ h @ u))
    accel = ud + np.einsum("kij,i,j->k", G, u, u)
    adot = (udd + np.einsum("mkij,m,i,j->k", dG, u, u, u)
            + 2 * np.einsum("kij,i,j->k", G, ud, u))
    jerk = adot + np.einsum("kij,i,j->k", G, u, accel)
    P = m.schouten(p) if need_schouten else np.zeros_like(h)
    return CovariantJet(h, P, G, u, accel, jerk)


def cge_residual_third_order(m: MetricField, jet: CurveJet) -> np.ndarray:
    c = covariant_jet(m, jet)
    u, a = c.velocity, c.accel
    q = c.speed2
    return (c.jerk - 3 * c.inner(u, a) / q * a + 1.5 * c.inner(a, a) / q * u
            - q * c.sharp(c.P) + 2 * float(u @ c.P @ u) * u)


def split_residual(h: np.ndarray, velocity: np.ndarray, F: np.ndarray):
    """Return ``(h(γ̇, F), normal part of F)``."""
    q = float(velocity @ h @ velocity)
    tang = float(velocity @ h @ F)
    return tang, F - tang / q * velocity


def _v_and_nabla_v(c: CovariantJet):
    u, a = c.velocity, c.accel
    q = c.speed2
    cc = c.inner(u, a)
    v = a / q - 2 * cc / q**2 * u
    qd = 2 * cc
    ccd = c.inner(a, a) + c.inner(u, c.jerk)
    nv = (c.jerk / q - a * qd / q**2
          - 2 * (ccd / q**2 - 2 * cc * qd / q**3) * u - 2 * cc / q**2 * a)
    return v, nv


def v_from_jet(m: MetricField, jet: CurveJet) -> np.ndarray:
    """``v = ∇_γ̇(|γ̇|⁻² γ̇)``."""
    return _v_and_nabla_v(covariant_jet(m, jet, need_schouten=False))[0]


def nabla_v_from_jet(m: MetricField, jet: CurveJet) -> np.ndarray:
    """Covariant derivative ``∇_γ̇ v`` of the canonical auxiliary field."""
    return _v_and_nabla_v(covariant_jet(m, jet, need_schouten=False))[1]


def state_from_jet(m: MetricField, jet: CurveJet) -> VState:
    """VState with ``v = v_from_jet`` and the matching coordinate ``v̇``."""
    c = covariant_jet(m, jet, need_schouten=False)
    v, nv = _v_and_nabla_v(c)
    vdot = nv - np.einsum("kij,i,j->k", c.G, c.velocity, v)
    return VState(jet.s, jet.gamma, jet.d1, v, vdot)


def second_eq_residual(m: MetricField, state: VState, vdot: np.ndarray | None = None) -> np.ndarray:
    """``|γ̇|⁻¹∇_γ̇(|γ̇| v) + ½|v|² γ̇ - P♯(γ̇)``, using ``h(γ̇, v) = -h(γ̇, ∇γ̇)/|γ̇|²``."""
    vdot = state.vdot if vdot is None else vdot
    if vdot is None:
        raise GeometryError("second-equation residual needs the derivative of v")
    h = m.at(state.gamma)
    u, v = np.asarray(state.velocity, float), np.asarray(state.v, float)
    if u.shape != (m.dim,) or v.shape != (m.dim,):
        raise GeometryError("dimension mismatch in state")
    _check_speed(float(u @ h @ u))
    G = christoffel(m, state.gamma)
    nv = np.asarray(vdot, float) + np.einsum("kij,i,j->k", G, u, v)
    P = m.schouten(state.gamma)
    return nv - float(u @ h @ v) * v + 0.5 * float(v @ h @ v) * u - np.linalg.solve(h, P @ u)


def kappa(m: MetricField, state: VState, vdot: np.ndarray | None = None) -> float:
    """Tangential part ``h(γ̇, second_eq_residual)``."""
    r = second_eq_residual(m, state, vdot)
    return float(state.velocity @ m.at(state.gamma) @ r)


def kappa_from_jet(m: MetricField, jet: CurveJet) -> float:
    return kappa(m, state_from_jet(m, jet))


@dataclass
class Trajectory:
    """Uniform samples of the auxiliary-field system."""

    metric: MetricField
    s: np.ndarray
    gamma: np.ndarray
    velocity: np.ndarray
    v: np.ndarray
    error: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    def __len__(self):
        return self.s.size

    def state(self, i: int) -> VState:
        return VState(float(self.s[i]), self.gamma[i], self.velocity[i], self.v[i])

    def curve(self, stride: int = 1) -> SampledCurve:
        sl = slice(None, None, stride)
        return SampledCurve(self.s[sl], self.gamma[sl], self.velocity[sl], name="trajectory")

    def vdot(self, i: int) -> np.ndarray:
        """Coordinate derivative of the sampled ``v`` (local degree-6 interpolant)."""
        from .interp import local_derivatives
        return local_derivatives(self.s, self.v, float(self.s[i]), nder=1)[1]

    def kappa(self, i: int) -> float:
        return kappa(self.metric, self.state(i), self.vdot(i))

    def to_csv(self, path, stride: int = 1):
        """Columns: s, γ, γ̇, v, κ, |F|, |F⊥|, |second-equation residual|."""
        n = self.metric.dim
        curve = self.curve()
        header = (["s"] + [f"gamma{i}" for i in range(n)] + [f"gammadot{i}" for i in range(n)]
                  + [f"v{i}" for i in range(n)] + ["kappa", "F_norm", "F_normal_norm", "eq2_norm"])
        rows = []
        for i in range(0, len(self), stride):
            st = self.state(i)
            vd = self.vdot(i)
            k = kappa(self.metric, st, vd)
            r2 = second_eq_residual(self.metric, st, vd)
            jet = curve.jet(float(self.s[i]))
            F = cge_residual_third_order(self.metric, jet)
            h = self.metric.at(st.gamma)
            _, Fn = split_residual(h, st.velocity, F)
            rows.append([st.s, *st.gamma, *st.velocity, *st.v, k,
                         np.sqrt(F @ h @ F), np.sqrt(abs(Fn @ h @ Fn)), np.sqrt(r2 @ h @ r2)])
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(x)) for x in r])
        return path


def _rhs(m: MetricField, y: np.ndarray) -> np.ndarray:
    n = m.dim
    g, u, v = y[:n], y[n:2 * n], y[2 * n:]
    h = m.at(g)
    q = float(u @ h @ u)
    _check_speed(q)
    G = christoffel(m, g)
    P = m.schouten(g)
    hv = float(u @ h @ v)
    udot = q * v - 2 * hv * u - np.einsum("kij,i,j->k", G, u, u)
    vdot = (hv * v - 0.5 * float(v @ h @ v) * u + np.linalg.solve(h, P @ u)
            - np.einsum("kij,i,j->k", G, u, v))
    return np.concatenate([u, udot, vdot])


def integrate(m: MetricField, init: VState, ds: float, steps: int) -> Trajectory:
    """Classical fourth-order Runge–Kutta with fixed step.

    On degeneration of ``|γ̇|`` the samples computed so far are returned with
    ``error`` set.
    """
    n = m.dim
    y = np.concatenate([np.asarray(init.gamma, float), np.asarray(init.velocity, float),
                        np.asarray(init.v, float)])
    if y.size != 3 * n:
        raise GeometryError("initial state has wrong dimension")
    out = [y]
    error = None
    try:
        _check_speed(float(y[n:2 * n] @ m.at(y[:n]) @ y[n:2 * n]))
        for _ in range(int(steps)):
            k1 = _rhs(m, y)
            k2 = _rhs(m, y + 0.5 * ds * k1)
            k3 = _rhs(m, y + 0.5 * ds * k2)
            k4 = _rhs(m, y + ds * k3)
            y = y + ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise DegenerateParametrisationError("non-finite state")
            out.append(y)
    except DegenerateParametrisationError as exc:
        error = str(exc)
    Y = np.asarray(out)
    s = init.s + ds * np.arange(len(Y))
    return Trajectory(m, s, Y[:, :n], Y[:, n:2 * n], Y[:, 2 * n:], error,
                      {"ds": ds, "steps": int(steps)})


def conformal_invariance_gap(m: MetricField, omega: Callable[[np.ndarray], float],
                             jet: CurveJet, step: float | None = None) -> float:
    """``‖F(γ, Ω²h) - F(γ, h)‖_h`` with everything recomputed for ``Ω² h``."""
    F0 = cge_residual_third_order(m, jet)
    F1 = cge_residual_third_order(rescaled(m, omega, step), jet)
    d = F1 - F0
    return float(np.sqrt(d @ m.at(jet.gamma) @ d))
