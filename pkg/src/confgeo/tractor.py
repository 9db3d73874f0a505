r"""Tractors along curves and their ambient realisation.

A tractor is a triple ``(top, mid, bot)`` relative to the representative ``h``.
Metric and connection along a curve with velocity ``γ̇``::

    ⟨(a, μ, b), (a', μ', b')⟩ = -(a b' + a' b) + h(μ, μ')

    D_s (a, μ, b) = ( ȧ + h(γ̇, μ),
                      ∇_s μ - a P♯(γ̇) + b γ̇,
                      ḃ - P(γ̇, μ) )

The connection is metric and reproduces

    |γ̇|⁻¹X = (0, 0, |γ̇|⁻¹)
    U = D_s(|γ̇|⁻¹X) = (0, |γ̇|⁻¹γ̇, ∂_s|γ̇|⁻¹)
    A = D_s U = (|γ̇|, |γ̇| v, ½|γ̇||v|² + |γ̇|⁻¹κ)

On the ambient space at ``ρ = 0`` a tractor is the vector
``σ⁻¹(a ∂_ρ + μ + b E)`` with ``E = σ∂_σ``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import fd
from .curves import Curve, CurveJet, VState
from .fg import AmbientPoint, ValidityError, ambient_field
from .geodesic import Trajectory, covariant_jet, kappa, state_from_jet
from .interp import local_derivatives
from .metric import GeometryError, MetricField, christoffel
from .surface import SurfaceJet

__all__ = ["Tractor", "CONNECTION", "tractor_metric", "slot_norm", "position", "velocity",
           "acceleration", "acceleration_from_state", "StateCurve", "tractor_derivative", "cge_residual_tractor", "ambient_lift",
           "AmbientGraph", "ambient_graph_jet", "graph_vs_surface", "ambient_extrinsic_check",
           "export_tractor_csv"]

# Coefficients of the non-derivative terms of D_s, one row per output slot:
#   top += CONNECTION["top"]["h(u,mid)"] * h(γ̇, μ)
#   mid += CONNECTION["mid"]["top*P(u)"] * a P♯γ̇ + CONNECTION["mid"]["bot*u"] * b γ̇
#   bot += CONNECTION["bot"]["P(u,mid)"] * P(γ̇, μ)
CONNECTION = {
    "top": {"h(u,mid)": 1.0},
    "mid": {"top*P(u)": -1.0, "bot*u": 1.0},
    "bot": {"P(u,mid)": -1.0},
}


@dataclass(frozen=True)
class Tractor:
    top: float
    mid: np.ndarray
    bot: float

    def __post_init__(self):
        object.__setattr__(self, "top", float(self.top))
        object.__setattr__(self, "mid", np.asarray(self.mid, dtype=float))
        object.__setattr__(self, "bot", float(self.bot))

    def array(self) -> np.ndarray:
        return np.concatenate([[self.top], self.mid, [self.bot]])

    @classmethod
    def from_array(cls, a) -> "Tractor":
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1:-1], a[-1])

    def __add__(self, o):
        return Tractor(self.top + o.top, self.mid + o.mid, self.bot + o.bot)

    def __sub__(self, o):
        return Tractor(self.top - o.top, self.mid - o.mid, self.bot - o.bot)

    def __mul__(self, k):
        return Tractor(k * self.top, k * self.mid, k * self.bot)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def tractor_metric(T1: Tractor, T2: Tractor, h: np.ndarray) -> float:
    if T1.mid.shape != T2.mid.shape or T1.mid.shape != (h.shape[0],):
        raise GeometryError("tractors live over different base points or dimensions")
    return -(T1.top * T2.bot + T2.top * T1.bot) + float(T1.mid @ h @ T2.mid)


def slot_norm(T: Tractor, h: np.ndarray) -> float:
    """Positive-definite slot norm ``sqrt(a² + |μ|²_h + b²)``."""
    return float(np.sqrt(T.top**2 + T.mid @ h @ T.mid + T.bot**2))


def position(m: MetricField, jet) -> Tractor:
    """The scaled position tractor ``|γ̇|⁻¹X``."""
    h = m.at(jet.gamma)
    return Tractor(0.0, np.zeros(m.dim), 1.0 / np.sqrt(float(jet.d1 @ h @ jet.d1)))


def velocity(m: MetricField, jet) -> Tractor:
    c = covariant_jet(m, jet, need_schouten=False)
    speed = np.sqrt(c.speed2)
    # ∂_s |γ̇|⁻¹ = -h(γ̇, ∇γ̇)/|γ̇|³
    return Tractor(0.0, c.velocity / speed, -c.inner(c.velocity, c.accel) / speed**3)


def acceleration(m: MetricField, jet) -> Tractor:
    return acceleration_from_state(m, state_from_jet(m, jet))


def acceleration_from_state(m: MetricField, st: VState) -> Tractor:
    """``(|γ̇|, |γ̇| v, ½|γ̇||v|² + |γ̇|⁻¹κ)`` for a state whose ``v`` need not be canonical."""
    h = m.at(st.gamma)
    speed = np.sqrt(float(st.velocity @ h @ st.velocity))
    v = np.asarray(st.v, dtype=float)
    return Tractor(speed, speed * v, 0.5 * speed * float(v @ h @ v) + kappa(m, st) / speed)


class StateCurve(Curve):
    """Curve and auxiliary field read off trajectory samples, optionally with ``v`` shifted.

    ``v_offset(s, γ, γ̇)`` returns the shift; its derivative is taken numerically.
    """

    def __init__(self, traj: Trajectory, v_offset=None, offset_step: float = 1e-4):
        self.traj = traj
        self.s_range = (float(traj.s[0]), float(traj.s[-1]))
        self.period = None
        self.name = "trajectory"
        self.v_offset = v_offset
        self.offset_step = offset_step

    def _samples(self, s, nder):
        t = self.traj
        return (local_derivatives(t.s, t.gamma, s, nder=0)[0],
                local_derivatives(t.s, t.velocity, s, nder=0)[0],
                local_derivatives(t.s, t.v, s, nder=nder))

    def jet(self, s):
        g, u, _ = self._samples(s, 0)
        return CurveJet(float(s), g, u, None, None)

    def state(self, s) -> VState:
        g, u, v = self._samples(s, 1)
        vv, vd = v[0], v[1]
        if self.v_offset is not None:
            f = lambda x: np.asarray(self.v_offset(x, *self._samples(x, 0)[:2]), dtype=float)
            vv = vv + f(s)
            vd = vd + fd.derivative_1d(f, s, self.offset_step, 4)
        return VState(float(s), g, u, vv, vd)


def tractor_derivative(m: MetricField, curve: Curve, field: Callable[[float], Tractor], s: float,
                       step: float = 1e-3, order: int = 6) -> Tractor:
    """``D_s T`` at ``s``; slot derivatives by central differences of ``field``."""
    jet = curve.jet(s)
    T = field(s)
    dT = Tractor.from_array(fd.derivative_1d(lambda x: field(x).array(), s, step, order))
    h = m.at(jet.gamma)
    P = m.schouten(jet.gamma)
    u = jet.d1
    G = christoffel(m, jet.gamma)
    nab_mid = dT.mid + np.einsum("kij,i,j->k", G, u, T.mid)
    Pu = np.linalg.solve(h, P @ u)
    top = dT.top + CONNECTION["top"]["h(u,mid)"] * float(u @ h @ T.mid)
    mid = (nab_mid + CONNECTION["mid"]["top*P(u)"] * T.top * Pu
           + CONNECTION["mid"]["bot*u"] * T.bot * u)
    bot = dT.bot + CONNECTION["bot"]["P(u,mid)"] * float(u @ P @ T.mid)
    return Tractor(top, mid, bot)


def cge_residual_tractor(m: MetricField, curve: Curve, s: float, step: float = 1e-3,
                         order: int = 6) -> dict:
    """``D_s A`` at ``s`` with its slot norm (used for acceptance) and tractor square."""
    if isinstance(curve, StateCurve):
        field = lambda x: acceleration_from_state(m, curve.state(x))
    else:
        field = lambda x: acceleration(m, curve.jet(x))
    DA = tractor_derivative(m, curve, field, s, step, order)
    h = m.at(curve.jet(s).gamma)
    return {"DA": DA, "slot_norm": slot_norm(DA, h), "square": tractor_metric(DA, DA, h)}


def ambient_lift(T: Tractor, a: AmbientPoint, tol: float = 1e-14):
    """Ambient vector ``σ⁻¹(a ∂_ρ + μ + b E)`` at a point of ``ρ = 0``.

    Returns ``(coordinate components in (σ, ρ, y), frame components in (E, ∂_ρ, ∂_y))``.
    """
    if abs(a.rho) > tol:
        raise ValidityError("tractors lift only at ρ = 0")
    if T.mid.shape != a.y.shape:
        raise GeometryError("dimension mismatch between tractor and ambient point")
    inv = 1.0 / a.sigma
    coords = np.concatenate([[T.bot], [T.top * inv], T.mid * inv])
    frame = np.concatenate([[T.bot * inv], [T.top * inv], T.mid * inv])
    return coords, frame


# Second-order jets in (s, t): value, first and second derivatives.

@dataclass
class _J2:
    v: np.ndarray
    d: np.ndarray      # d[b] = ∂_b
    dd: np.ndarray     # dd[b, c]

    @staticmethod
    def const(c):
        c = np.asarray(c, dtype=float)
        return _J2(c, np.zeros((2,) + c.shape), np.zeros((2, 2) + c.shape))

    def __add__(self, o):
        o = o if isinstance(o, _J2) else _J2.const(o)
        return _J2(self.v + o.v, self.d + o.d, self.dd + o.dd)

    __radd__ = __add__

    def __mul__(self, o):
        if not isinstance(o, _J2):
            return _J2(self.v * o, self.d * o, self.dd * o)
        v = self.v * o.v
        d = self.d * o.v + self.v * o.d
        dd = (self.dd * o.v + self.v * o.dd
              + np.einsum("b...,c...->bc...", self.d, o.d) + np.einsum("c...,b...->bc...", self.d, o.d))
        return _J2(v, d, dd)

    __rmul__ = __mul__

    def inv(self):
        """Reciprocal of a scalar jet."""
        f = self.v
        return _J2(1 / f, -self.d / f**2,
                   -self.dd / f**2 + 2 * np.einsum("b,c->bc", self.d, self.d) / f**3)


SIGMA_COEFF = 2.0 / 3.0


class AmbientGraph:
    """Graph over the scale-bundle lift of a curve, built from its surface jet.

        σ = 1/(t|γ̇|) + (t/2)(A^σ + ⅔⟨A,A⟩|γ̇|⁻¹)
        ρ = (t/2) A^ρ,    y = γ + (t/2) A^y

    with the acceleration tractor read as the ambient vector at ``σ(s, t)``.
    """

    def __init__(self, jet: SurfaceJet):
        self.jet = jet
        m = jet.metric
        hs = [m.at(g) for g in jet.gamma]
        speed = jet.x1
        vv = np.array([w @ h @ w for w, h in zip(jet.v, hs)])
        bot = 0.5 * speed * vv + jet.kappa / speed
        AA = -2.0 * jet.kappa
        self.AA = AA
        self.bot = bot
        cols = np.column_stack([speed, bot + SIGMA_COEFF * AA / speed, jet.gamma,
                                speed[:, None] * jet.v])
        self._cols = cols
        self.ambient = ambient_field(m)

    def _coeffs(self, s, nder=2):
        C = local_derivatives(self.jet.s, self._cols, s, nder=nder, period=self.jet.period)
        n = self.jet.dim
        return C[:, 0], C[:, 1], C[:, 2:2 + n], C[:, 2 + n:]

    def _j2(self, s, t):
        sp, c1, gam, w = self._coeffs(s)

        def lift_s(arr):
            # function of s only, lifted to a jet in (s, t)
            z = np.zeros_like(arr[0])
            return _J2(arr[0], np.stack([arr[1], z]),
                       np.stack([np.stack([arr[2], z]), np.stack([z, z])]))

        T = _J2(np.asarray(t, dtype=float), np.array([0.0, 1.0]), np.zeros((2, 2)))
        SP, C1, GAM, W = lift_s(sp), lift_s(c1), lift_s(gam), lift_s(w)
        sigma = (T * SP).inv() + T * C1 * 0.5
        isig = sigma.inv()
        rho = T * SP * isig * 0.5
        fac = T * isig * 0.5
        # scalar jet times vector jet
        y = GAM + _J2(fac.v * W.v, fac.d[:, None] * W.v + fac.v * W.d,
                      fac.dd[:, :, None] * W.v + fac.v * W.dd
                      + np.einsum("b,ck->bck", fac.d, W.d) + np.einsum("c,bk->bck", fac.d, W.d))
        Z = np.concatenate([[sigma.v], [rho.v], y.v])
        dZ = np.column_stack([sigma.d, rho.d, y.d])
        ddZ = np.concatenate([sigma.dd[:, :, None], rho.dd[:, :, None], y.dd], axis=2)
        return Z, dZ, ddZ

    def point(self, s, t):
        return self._j2(s, t)[0]

    def acceleration_at(self, s) -> Tractor:
        j = self.jet
        i_vals = self._coeffs(s, 0)
        speed = float(i_vals[0][0])
        v = local_derivatives(j.s, j.v, s, nder=0, period=j.period)[0]
        kap = float(local_derivatives(j.s, j.kappa, s, nder=0, period=j.period)[0])
        h = j.metric.at(i_vals[2][0])
        return Tractor(speed, speed * v, 0.5 * speed * float(v @ h @ v) + kap / speed)


def ambient_graph_jet(jet: SurfaceJet) -> AmbientGraph:
    return AmbientGraph(jet)


def graph_vs_surface(graph: AmbientGraph, s: float, t: float) -> dict:
    """Differences between the ambient graph and the Poincaré surface jet on ``l = 1``.

    ``x`` is compared through ``x = 1/σ``, ``ρ`` against ``x²/2`` and ``σ``
    against ``1/x``.
    """
    Z = graph.point(s, t)
    X = graph.jet.point(s, t).X
    sigma, rho, y = Z[0], Z[1], Z[2:]
    return {"x": abs(1 / sigma - X[0]), "sigma": abs(sigma - 1 / X[0]),
            "rho": abs(rho - 0.5 * X[0] ** 2), "y": float(np.max(np.abs(y - X[1:]))),
            "l": abs(sigma * np.sqrt(2 * rho) - 1)}


def ambient_extrinsic_check(graph: AmbientGraph, s: float, t: float, DA: Tractor | None = None,
                            U: Tractor | None = None) -> dict:
    """Second fundamental form of the graph in the ambient metric.

    Each entry of ``K`` is the normal part of ``∇_b ∂_c`` in the frame
    ``(E, ∂_ρ, ∂_y)``.  Expected leading terms: E-coefficients
    ``1/t² ∓ ⟨A,A⟩/3`` and mixed non-E part ``D_sA + ⟨A,A⟩U`` lifted at ``σ``.
    """
    Z, dZ, ddZ = graph._j2(s, t)
    g = graph.ambient.at(Z)
    Gam = christoffel(graph.ambient, Z)
    acc = ddZ + np.einsum("kij,bi,cj->bck", Gam, dZ, dZ)
    G = dZ @ g @ dZ.T
    coef = np.einsum("ab,cdk,kl,bl->cda", np.linalg.inv(G), acc, g, dZ)
    perp = acc - np.einsum("cda,ak->cdk", coef, dZ)
    sigma = Z[0]
    frame = perp.copy()
    frame[:, :, 0] = perp[:, :, 0] / sigma
    AA = float(local_derivatives(graph.jet.s, graph.AA, s, nder=0, period=graph.jet.period)[0])
    out = {"K": frame, "sigma": sigma, "AA": AA,
           "E_ss": frame[0, 0, 0], "E_tt": frame[1, 1, 0], "E_st": frame[0, 1, 0],
           "E_ss_expected": 1 / t**2 - AA / 3, "E_tt_expected": 1 / t**2 + AA / 3}
    if DA is not None and U is not None:
        target = DA + AA * U
        a = AmbientPoint(sigma, 0.0, Z[2:])
        _, fr = ambient_lift(target, a)
        out["mixed_nonE"] = frame[0, 1, 1:]
        out["mixed_nonE_expected"] = fr[1:]
    return out


def export_tractor_csv(m: MetricField, curve: Curve, s_values, path, step: float = 1e-3):
    """Rows ``s, X slots, U slots, A slots, ⟨A,A⟩, -2κ, ‖D_sA‖``."""
    n = m.dim
    slots = lambda p: [f"{p}_top"] + [f"{p}_mid{i}" for i in range(n)] + [f"{p}_bot"]
    header = ["s"] + slots("X") + slots("U") + slots("A") + ["AA", "minus_2kappa", "DA_norm"]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for s in s_values:
            jet = curve.jet(s)
            h = m.at(jet.gamma)
            X, U, A = position(m, jet), velocity(m, jet), acceleration(m, jet)
            k = kappa(m, state_from_jet(m, jet))
            r = cge_residual_tractor(m, curve, s, step)
            row = [s, *X.array(), *U.array(), *A.array(), tractor_metric(A, A, h), -2 * k,
                   r["slot_norm"]]
            w.writerow([repr(float(x)) for x in row])
    return path
