"""Central finite-difference stencils for array-valued functions of a point."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

# first-derivative offsets/weights and second-derivative (diagonal) weights
_D1 = {
    2: ((-1, 1), (-0.5, 0.5)),
    4: ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
    6: ((-3, -2, -1, 1, 2, 3), (-1 / 60, 9 / 60, -45 / 60, 45 / 60, -9 / 60, 1 / 60)),
}
_D2 = {
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    4: ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
    6: ((-3, -2, -1, 0, 1, 2, 3),
        (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90)),
}


def _steps(step, n):
    steps = np.broadcast_to(np.asarray(step, dtype=float), (n,))
    if np.any(steps <= 0):
        raise ValueError("finite-difference step must be positive")
    return steps


def _check_order(order):
    if order not in _D1:
        raise ValueError(f"unsupported stencil order {order}; choose 2, 4 or 6")


def derivative_1d(f: Callable[[float], np.ndarray], x: float, step: float,
                  order: int = 4, nder: int = 1) -> np.ndarray:
    """First or second derivative of a scalar-argument function."""
    _check_order(order)
    offs, w = (_D1 if nder == 1 else _D2)[order]
    acc = sum(wi * np.asarray(f(x + o * step), dtype=float) for o, wi in zip(offs, w))
    return acc / step**nder


def jacobian(f: Callable[[np.ndarray], np.ndarray], p: np.ndarray,
             step: float | Sequence[float] = 1e-4, order: int = 2) -> np.ndarray:
    """Return ``d[k] = ∂_k f(p)`` stacked along a new leading axis."""
    _check_order(order)
    p = np.asarray(p, dtype=float)
    n = p.size
    steps = _steps(step, n)
    offs, w = _D1[order]
    out = []
    for k in range(n):
        acc = 0.0
        for o, wk in zip(offs, w):
            q = p.copy()
            q[k] += o * steps[k]
            acc = acc + wk * np.asarray(f(q), dtype=float)
        out.append(acc / steps[k])
    return np.stack(out)


def hessian(f: Callable[[np.ndarray], np.ndarray], p: np.ndarray,
            step: float | Sequence[float] = 1e-4, order: int = 2,
            f0: np.ndarray | None = None) -> np.ndarray:
    """Return ``dd[k, l] = ∂_k ∂_l f(p)``; mixed terms use nested first-derivative stencils."""
    _check_order(order)
    p = np.asarray(p, dtype=float)
    n = p.size
    steps = _steps(step, n)
    if f0 is None:
        f0 = np.asarray(f(p), dtype=float)
    offs1, w1 = _D1[order]
    offs2, w2 = _D2[order]
    out = np.empty((n, n) + np.shape(f0))
    for k in range(n):
        acc = 0.0
        for o, wk in zip(offs2, w2):
            if o == 0:
                acc = acc + wk * f0
                continue
            q = p.copy()
            q[k] += o * steps[k]
            acc = acc + wk * np.asarray(f(q), dtype=float)
        out[k, k] = acc / steps[k] ** 2
        for l in range(k + 1, n):
            acc = 0.0
            for a, wa in zip(offs1, w1):
                for b, wb in zip(offs1, w1):
                    q = p.copy()
                    q[k] += a * steps[k]
                    q[l] += b * steps[l]
                    acc = acc + wa * wb * np.asarray(f(q), dtype=float)
            out[k, l] = out[l, k] = acc / (steps[k] * steps[l])
    return out
