"""Named analytic metrics, built symbolically and lambdified.

Registered names: ``flat``, ``round-sphere`` and ``conformally-flat`` (with a
named factor ``φ`` so that ``h = e^{2φ} δ``).
"""

from __future__ import annotations

from typing import Callable

import numpy as np
import sympy as sp

from .metric import GeometryError, MetricField

__all__ = ["symbolic_metric", "flat", "round_sphere", "conformally_flat",
           "CONFORMAL_FACTORS", "make_metric", "METRICS"]


def _lambdify_array(coords, expr, shape):
    f = sp.lambdify([coords], sp.Array(expr).tolist(), modules="numpy")

    def call(p):
        return np.broadcast_to(np.asarray(f(np.asarray(p, dtype=float)), dtype=float), shape).copy()

    return call


def symbolic_metric(coords, H: sp.Matrix, P=None, P0=None, name="", params=None,
                    fd_step=1e-4) -> MetricField:
    """MetricField with exact derivative closures from a sympy matrix ``H``."""
    n = len(coords)
    H = sp.Matrix(H)
    d1 = [[[sp.diff(H[i, j], coords[k]) for j in range(n)] for i in range(n)] for k in range(n)]
    d2 = [[[[sp.diff(H[i, j], coords[k], coords[l]) for j in range(n)] for i in range(n)]
           for l in range(n)] for k in range(n)]
    kwargs = {}
    if P is not None:
        kwargs["schouten_fn"] = _lambdify_array(coords, sp.Matrix(P).tolist(), (n, n))
    if P0 is not None:
        kwargs["mobius_P0"] = _lambdify_array(coords, sp.Matrix(P0).tolist(), (n, n))
    return MetricField(
        dim=n,
        eval=_lambdify_array(coords, H.tolist(), (n, n)),
        d1=_lambdify_array(coords, d1, (n, n, n)),
        d2=_lambdify_array(coords, d2, (n, n, n, n)),
        fd_step=fd_step,
        name=name,
        params=dict(params or {}),
        **kwargs,
    )


def _coords(dim):
    return sp.symbols(f"y0:{dim}", real=True)


def flat(dim: int = 3) -> MetricField:
    y = _coords(dim)
    zero = sp.zeros(dim, dim)
    return symbolic_metric(y, sp.eye(dim), P=zero, P0=zero if dim == 2 else None,
                           name="flat", params={"dim": dim})


def round_sphere(dim: int = 3, radius: float = 1.0, coords: str = "polar") -> MetricField:
    """Round sphere of the given radius.

    ``polar`` uses (θ, φ) for dim 2 and (χ, θ, φ) for dim 3; ``stereographic``
    uses ``h = 4R² / (1 + |y|²)² δ`` in any dimension.
    """
    R = sp.nsimplify(radius)
    if coords == "stereographic":
        m = conformally_flat(dim, "sphere", {"radius": radius})
        return MetricField(**{**m.__dict__, "name": "round-sphere",
                              "params": {"dim": dim, "radius": radius, "coords": coords}})
    if coords != "polar":
        raise GeometryError(f"unknown sphere chart {coords!r}")
    y = _coords(dim)
    if dim == 2:
        diag = [R**2, R**2 * sp.sin(y[0]) ** 2]
    elif dim == 3:
        diag = [R**2, R**2 * sp.sin(y[0]) ** 2, R**2 * sp.sin(y[0]) ** 2 * sp.sin(y[1]) ** 2]
    else:
        raise GeometryError("polar sphere chart is implemented for dim 2 and 3")
    H = sp.diag(*diag)
    return symbolic_metric(y, H, P=H / (2 * R**2), P0=sp.zeros(dim, dim) if dim == 2 else None,
                           name="round-sphere",
                           params={"dim": dim, "radius": radius, "coords": coords})


def _factor_linear(y, c=1.0, axis=0):
    return sp.nsimplify(c) * y[int(axis)]


def _factor_gaussian(y, amplitude=0.3, width=1.0):
    r2 = sum(v**2 for v in y)
    return sp.nsimplify(amplitude) * sp.exp(-r2 / sp.nsimplify(width) ** 2)


def _factor_sphere(y, radius=1.0):
    r2 = sum(v**2 for v in y)
    return sp.log(2 * sp.nsimplify(radius) / (1 + r2))


CONFORMAL_FACTORS: dict[str, Callable] = {
    "linear": _factor_linear,
    "gaussian": _factor_gaussian,
    "sphere": _factor_sphere,
}


def conformally_flat(dim: int = 3, factor: str = "linear", params: dict | None = None) -> MetricField:
    """``h = e^{2φ} δ`` with ``P = -∇dφ + dφ⊗dφ - ½|dφ|² δ`` (flat quantities)."""
    params = dict(params or {})
    if factor not in CONFORMAL_FACTORS:
        raise GeometryError(f"unknown conformal factor {factor!r}")
    y = _coords(dim)
    phi = CONFORMAL_FACTORS[factor](y, **params)
    grad = sp.Matrix([sp.diff(phi, v) for v in y])
    hess = sp.hessian(phi, y)
    P = -hess + grad * grad.T - sp.Rational(1, 2) * (grad.T * grad)[0, 0] * sp.eye(dim)
    H = sp.exp(2 * phi) * sp.eye(dim)
    P0 = None
    if dim == 2:
        P0 = P - (P.trace() / 2) * sp.eye(2)
    return symbolic_metric(y, H, P=sp.simplify(P), P0=P0, name="conformally-flat",
                           params={"dim": dim, "factor": factor, **params})


METRICS = {
    "flat": flat,
    "round-sphere": round_sphere,
    "conformally-flat": conformally_flat,
}


def make_metric(name: str, **kwargs) -> MetricField:
    try:
        builder = METRICS[name]
    except KeyError:
        raise GeometryError(f"unknown metric {name!r}; known: {sorted(METRICS)}") from None
    return builder(**kwargs)
