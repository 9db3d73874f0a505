r"""Boundary-anchored surfaces in the Poincaré–Einstein space and their extrinsic geometry.

A boundary curve ``γ`` with auxiliary field ``v`` determines the surface jet

    x(s, t) = t |γ̇| + (t³/3) x3,      x3 = -¾|γ̇|³|v|² + ½|γ̇| κ(γ, v, h)
    y(s, t) = γ(s) + (t²/2)|γ̇|² v + (t³/3) n

with ``n`` the (normal) Neumann coefficient.  Coefficients live on a uniform
``s``-grid; their ``s``-derivatives come from local degree-6 interpolation,
``t``-derivatives are exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
import numpy as np

from .curves import Curve, CurveJet, VState
from .fg import X_MAX, PoincarePoint, ValidityError, pe_field
from .geodesic import Trajectory, _check_speed, kappa, state_from_jet
from .interp import local_derivatives
from .metric import GeometryError, MetricField, christoffel, scalar_curvature

__all__ = ["SurfacePoint", "Surface", "SurfaceJet", "HemisphereSurface", "surface_jet",
           "normal_basis", "embed", "induced_metric", "normal_seed", "normal_frame",
           "second_fundamental_form", "k_norm", "mean_curvature", "gauss_curvature",
           "export_surface_csv"]


@dataclass(frozen=True)
class SurfacePoint:
    """Embedding and its ``(s, t)`` derivatives, coordinates ``(x, y)``."""

    X: np.ndarray
    Xs: np.ndarray
    Xt: np.ndarray
    Xss: np.ndarray | None = None
    Xst: np.ndarray | None = None
    Xtt: np.ndarray | None = None

    @property
    def tangents(self):
        return np.stack([self.Xs, self.Xt])

    @property
    def hessian(self):
        """``H[b, c] = ∂_b ∂_c X``."""
        return np.stack([np.stack([self.Xss, self.Xst]), np.stack([self.Xst, self.Xtt])])


class Surface:
    """Parametrised surface ``(s, t) -> (x, y)`` in a Poincaré–Einstein space ``g``."""

    g: MetricField
    s_range: tuple[float, float]
    period: float | None = None

    def point(self, s: float, t: float, second: bool = False) -> SurfacePoint:  # pragma: no cover
        raise NotImplementedError

    def seeds(self, s: float, t: float, pt: SurfacePoint):
        """Approximate normals used before exact projection (coordinate vectors by default)."""
        n = pt.X.size
        return list(np.eye(n))


def normal_basis(h: np.ndarray, u: np.ndarray) -> np.ndarray:
    """h-orthonormal basis of the complement of ``u`` (Gram–Schmidt on coordinate vectors,
    most-normal candidates first)."""
    n = u.size
    q = float(u @ h @ u)
    cands = []
    for e in np.eye(n):
        w = e - float(u @ h @ e) / q * u
        cands.append((-float(w @ h @ w), len(cands), w))
    cands.sort(key=lambda c: (round(c[0], 12), c[1]))
    out = []
    for _, _, w in cands:
        for b in out:
            w = w - float(b @ h @ w) * b
        nw = float(w @ h @ w)
        if nw > 1e-12:
            out.append(w / np.sqrt(nw))
        if len(out) == n - 1:
            break
    if len(out) != n - 1:
        raise GeometryError("could not build a normal basis")
    return np.array(out)


def _as_field(spec, grid_jets, n, what):
    """Evaluate an optional per-sample vector field given as callable(jet) or array."""
    N = len(grid_jets)
    if spec is None:
        return np.zeros((N, n))
    if callable(spec):
        return np.array([np.asarray(spec(j), dtype=float) for j in grid_jets])
    arr = np.asarray(spec, dtype=float)
    if arr.shape == (n,):
        arr = np.broadcast_to(arr, (N, n)).copy()
    if arr.shape != (N, n):
        raise GeometryError(f"{what} must have shape ({N}, {n})")
    return arr


class SurfaceJet(Surface):
    """Third-order surface jet of a boundary curve on a uniform ``s``-grid."""

    def __init__(self, metric: MetricField, s, gamma, velocity, v, vdot, neumann=None,
                 period=None, x_max=X_MAX):
        self.metric = metric
        self.s = np.asarray(s, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        self.velocity = np.asarray(velocity, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.vdot = np.asarray(vdot, dtype=float)
        n = metric.dim
        N = self.s.size
        self.neumann = np.zeros((N, n)) if neumann is None else np.asarray(neumann, dtype=float)
        self.period = period
        self.x_max = x_max
        self.s_range = (float(self.s[0]), float(self.s[0] + period) if period else float(self.s[-1]))
        self.g = pe_field(metric, x_max)
        hs = [metric.at(p) for p in self.gamma]
        speed2 = np.array([u @ h @ u for u, h in zip(self.velocity, hs)])
        for q in speed2:
            _check_speed(q)
        for u, nn, h in zip(self.velocity, self.neumann, hs):
            if abs(float(u @ h @ nn)) > 1e-10 * max(1.0, np.sqrt(float(nn @ h @ nn))):
                raise GeometryError("Neumann coefficient is not normal to the curve")
        self.kappa = np.array([kappa(metric, VState(si, g, u, vv, vd))
                               for si, g, u, vv, vd in zip(self.s, self.gamma, self.velocity,
                                                           self.v, self.vdot)])
        vv2 = np.array([w @ h @ w for w, h in zip(self.v, hs)])
        self.x1 = np.sqrt(speed2)
        self.x3 = -0.75 * self.x1**3 * vv2 + 0.5 * self.x1 * self.kappa
        self.y2 = 0.5 * speed2[:, None] * self.v
        self._C = np.column_stack([self.x1, self.x3, self.gamma, self.y2, self.neumann])
        self._cache = {}

    @property
    def dim(self):
        return self.metric.dim

    def coefficients(self, s: float, nder: int = 2):
        """Interpolated ``(x1, x3, y0, y2, n)`` and their first ``nder`` s-derivatives."""
        key = (float(s), nder)
        C = self._cache.get(key)
        if C is None:
            if len(self._cache) > 4096:
                self._cache.clear()
            C = self._cache[key] = local_derivatives(self.s, self._C, s, nder=nder,
                                                     period=self.period)
        n = self.dim
        return C[:, 0], C[:, 1], C[:, 2:2 + n], C[:, 2 + n:2 + 2 * n], C[:, 2 + 2 * n:]

    def point(self, s, t, second=False):
        if not t > 0:
            raise ValidityError(f"t must be positive, got {t}")
        x1, x3, y0, y2, nn = self.coefficients(s, 2 if second else 1)
        t2, t3 = t * t, t**3 / 3

        def pack(k):
            return np.concatenate([[t * x1[k] + t3 * x3[k]], y0[k] + t2 * y2[k] + t3 * nn[k]])

        X, Xs = pack(0), pack(1)
        if not 0 < X[0] <= self.x_max:
            raise ValidityError(f"x = {X[0]:.4g} outside (0, {self.x_max}]")
        Xt = np.concatenate([[x1[0] + t2 * x3[0]], 2 * t * y2[0] + t2 * nn[0]])
        if not second:
            return SurfacePoint(X, Xs, Xt)
        Xss = pack(2)
        Xst = np.concatenate([[x1[1] + t2 * x3[1]], 2 * t * y2[1] + t2 * nn[1]])
        Xtt = np.concatenate([[2 * t * x3[0]], 2 * y2[0] + 2 * t * nn[0]])
        return SurfacePoint(X, Xs, Xt, Xss, Xst, Xtt)

    def asymptotic_normal(self, s, t, phi):
        """Asymptotic normal field with boundary data ``phi`` (valid to O(t³))."""
        m = self.metric
        _, _, y0, _, nn = self.coefficients(s, 0)
        gam = y0[0]
        u = local_derivatives(self.s, self.velocity, s, nder=0, period=self.period)[0]
        v = local_derivatives(self.s, self.v, s, nder=0, period=self.period)[0]
        dv = local_derivatives(self.s, self.vdot, s, nder=0, period=self.period)[0]
        h, dh = m.derivatives(gam, order=1)
        P = m.schouten(gam)
        speed = np.sqrt(float(u @ h @ u))
        phi = np.asarray(phi, dtype=float)
        vdh = np.einsum("i,ijk->jk", v, dh)
        Phi_x = -float(phi @ h @ (t * speed * v + t * t * nn[0] / speed))
        corr = float(phi @ h @ dv) + float(phi @ (vdh - 2 * P) @ u)
        Phi_y = phi - 0.5 * t * t * corr * u
        return np.concatenate([[Phi_x], Phi_y])

    def boundary_normals(self, s):
        h = self.metric.at(local_derivatives(self.s, self.gamma, s, nder=0, period=self.period)[0])
        u = local_derivatives(self.s, self.velocity, s, nder=0, period=self.period)[0]
        return normal_basis(h, u)

    def seeds(self, s, t, pt):
        return [self.asymptotic_normal(s, t, eta) for eta in self.boundary_normals(s)]


def surface_jet(m: MetricField, curve, neumann=None, v_offset=None, resolution: int = 256,
                x_max: float = X_MAX) -> SurfaceJet:
    """Surface jet of a curve (analytic :class:`Curve` or integrated :class:`Trajectory`).

    ``v`` is the canonical field ``∇_γ̇(|γ̇|⁻²γ̇)``; ``v_offset`` (callable of the
    curve jet, or per-sample array) perturbs it for contrast tests.  ``neumann``
    is the order-t³ normal coefficient, zero by default.
    """
    if isinstance(curve, Trajectory):
        s = curve.s
        jets = [CurveJet(float(si), g, u, None, None)
                for si, g, u in zip(s, curve.gamma, curve.velocity)]
        gamma, vel, v = curve.gamma, curve.velocity, curve.v.copy()
        vdot = np.array([local_derivatives(s, v, si, nder=1)[1] for si in s])
        period = None
    elif isinstance(curve, Curve):
        a, b = curve.s_range
        if curve.closed:
            s = a + curve.period * np.arange(resolution) / resolution
        else:
            s = np.linspace(a, b, resolution)
        jets = [curve.jet(si) for si in s]
        states = [state_from_jet(m, j) for j in jets]
        gamma = np.array([j.gamma for j in jets])
        vel = np.array([j.d1 for j in jets])
        v = np.array([st.v for st in states])
        vdot = np.array([st.vdot for st in states])
        period = curve.period
    else:
        raise GeometryError("surface_jet needs a Curve or a Trajectory")
    n = m.dim
    if v_offset is not None:
        off = _as_field(v_offset, jets, n, "v_offset")
        doff = np.array([local_derivatives(s, off, si, nder=1, period=period)[1] for si in s])
        v = v + off
        vdot = vdot + doff
    nn = _as_field(neumann, jets, n, "neumann")
    return SurfaceJet(m, s, gamma, vel, v, vdot, nn, period, x_max)


class HemisphereSurface(Surface):
    """Totally geodesic hemisphere over the unit circle in hyperbolic 3-space.

    ``x = 2t/(1+t²)``, ``y = (1-t²)/(1+t²)·(cos s, sin s)`` for ``t ∈ (0, 1]``.
    """

    def __init__(self, x_max: float = 1.0):
        from .registry import flat
        self.metric = flat(2)
        self.g = pe_field(self.metric, x_max)
        self.period = 2 * np.pi
        self.s_range = (0.0, 2 * np.pi)
        self.x_max = x_max

    def point(self, s, t, second=False):
        d = 1 + t * t
        x, r = 2 * t / d, (1 - t * t) / d
        xt, rt = 2 * (1 - t * t) / d**2, -4 * t / d**2
        c, sn = np.cos(s), np.sin(s)
        X = np.array([x, r * c, r * sn])
        Xs = np.array([0.0, -r * sn, r * c])
        Xt = np.array([xt, rt * c, rt * sn])
        if not second:
            return SurfacePoint(X, Xs, Xt)
        xtt = 4 * t * (t * t - 3) / d**3
        rtt = 4 * (3 * t * t - 1) / d**3
        Xss = np.array([0.0, -r * c, -r * sn])
        Xst = np.array([0.0, -rt * sn, rt * c])
        Xtt = np.array([xtt, rtt * c, rtt * sn])
        return SurfacePoint(X, Xs, Xt, Xss, Xst, Xtt)


def _surface(obj) -> Surface:
    if isinstance(obj, Surface):
        return obj
    raise GeometryError("expected a Surface")


def embed(jet: SurfaceJet, s: float, t: float) -> PoincarePoint:
    X = jet.point(s, t).X
    return PoincarePoint(X[0], X[1:])


def induced_metric(surf: Surface, s: float, t: float, pt: SurfacePoint | None = None) -> np.ndarray:
    """``Σ*g`` in the basis ``{∂_s, ∂_t}``."""
    surf = _surface(surf)
    pt = surf.point(s, t) if pt is None else pt
    T = pt.tangents
    return T @ surf.g.at(pt.X) @ T.T


def normal_seed(surf: Surface, s, t, pt=None):
    pt = surf.point(s, t) if pt is None else pt
    return np.array(surf.seeds(s, t, pt))


def normal_frame(surf: Surface, s, t, pt: SurfacePoint | None = None, seeds=None):
    """Seed normals projected exactly onto the g-normal space of the surface.

    Returns ``(Φ⊥, N)`` with ``N`` their Gram matrix.
    """
    surf = _surface(surf)
    pt = surf.point(s, t) if pt is None else pt
    g = surf.g.at(pt.X)
    T = pt.tangents
    G = T @ g @ T.T
    seeds = normal_seed(surf, s, t, pt) if seeds is None else np.atleast_2d(seeds)
    coeff = np.linalg.solve(G, T @ g @ seeds.T)          # (2, k)
    perp = seeds - coeff.T @ T
    codim = pt.X.size - 2
    if perp.shape[0] > codim:
        # generic seeds: g-orthonormalise and keep the first independent ones
        out = []
        for w in perp:
            for b in out:
                w = w - float(b @ g @ w) * b
            nw = float(w @ g @ w)
            if nw > 1e-10 * float(np.max(np.abs(g))):
                out.append(w / np.sqrt(nw))
            if len(out) == codim:
                break
        perp = np.array(out)
    N = perp @ g @ perp.T
    if np.linalg.matrix_rank(N) < perp.shape[0]:
        raise GeometryError("degenerate normal frame")
    return perp, N


def second_fundamental_form(surf: Surface, s, t, frame=None):
    """``K[a, b, c] = g(∂_b∂_c X + Γ(∂_b X, ∂_c X), Φ_a)`` for the projected normals.

    Returns ``(K, G, N)`` with the induced metric ``G`` and normal Gram matrix ``N``.
    """
    surf = _surface(surf)
    pt = surf.point(s, t, second=True)
    g = surf.g.at(pt.X)
    Gam = christoffel(surf.g, pt.X)
    T = pt.tangents
    G = T @ g @ T.T
    perp, N = normal_frame(surf, s, t, pt, seeds=frame)
    acc = pt.hessian + np.einsum("kij,bi,cj->bck", Gam, T, T)
    K = np.einsum("bck,kl,al->abc", acc, g, perp)
    return K, G, N


def k_norm(surf: Surface, s, t, frame=None) -> float:
    """``|K|`` contracted with the induced metric and the normal Gram matrix."""
    K, G, N = second_fundamental_form(surf, s, t, frame)
    Gi, Ni = np.linalg.inv(G), np.linalg.inv(N)
    val = np.einsum("ab,ce,df,acd,bef", Ni, Gi, Gi, K, K)
    return float(np.sqrt(max(val, 0.0)))


def mean_curvature(surf: Surface, s, t, frame=None) -> np.ndarray:
    """``G^{bc} K_a(b, c)`` per normal (normals as seeded, not normalised)."""
    K, G, _ = second_fundamental_form(surf, s, t, frame)
    return np.einsum("bc,abc->a", np.linalg.inv(G), K)


def gauss_curvature(surf: Surface, s, t, step_s: float = 1e-2, rel_step_t: float = 0.005,
                    order: int = 6) -> float:
    """Intrinsic curvature of ``Σ*g`` by finite differences (steps relative to ``t`` in t)."""
    surf = _surface(surf)
    m2 = MetricField(2, eval=lambda q: induced_metric(surf, q[0], q[1]),
                     fd_step=(step_s, rel_step_t * t), fd_order=order, name="induced")
    return 0.5 * scalar_curvature(m2, np.array([s, t]))


def export_surface_csv(surf: Surface, s_values, t_values, path):
    """Rows ``s, t, x, y…, |K|, TrK per normal, G_ss, G_st, G_tt``."""
    surf = _surface(surf)
    rows = []
    for s in s_values:
        for t in t_values:
            pt = surf.point(s, t)
            G = induced_metric(surf, s, t, pt)
            H = mean_curvature(surf, s, t)
            rows.append([s, t, *pt.X, k_norm(surf, s, t), *H, G[0, 0], G[0, 1], G[1, 1]])
    dim = surf.point(s_values[0], t_values[0]).X.size
    header = (["s", "t", "x"] + [f"y{i}" for i in range(dim - 1)] + ["K_norm"]
              + [f"TrK{i}" for i in range(len(rows[0]) - dim - 6)] + ["G_ss", "G_st", "G_tt"])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) for x in r])
    return path
