"""Local polynomial interpolation on uniform grids (value plus derivatives)."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import KroghInterpolator


def local_derivatives(grid: np.ndarray, values: np.ndarray, s: float, nder: int = 2,
                      width: int = 7, period: float | None = None) -> np.ndarray:
    """Derivatives ``[f, f', ..., f^(nder)]`` at ``s`` of the degree ``width-1``
    interpolant through the ``width`` grid nodes nearest to ``s``.

    ``grid`` must be uniform.  With ``period`` the samples are treated as one
    period of a periodic function (``grid[0] + period`` is not repeated).
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    N = grid.size
    ds = grid[1] - grid[0]
    centre = int(np.round((s - grid[0]) / ds))
    half = width // 2
    if period is None:
        if N < width:
            raise ValueError("not enough samples for the interpolation stencil")
        lo = min(max(centre - half, 0), N - width)
        idx = np.arange(lo, lo + width)
        xs = grid[idx]
    else:
        idx = np.arange(centre - half, centre - half + width)
        xs = grid[0] + idx * ds
        idx = idx % N
        # bring s into the window's period copy
        s = s - period * np.round((s - xs[half]) / period)
    ys = values[idx]
    k = KroghInterpolator((xs - xs[half]) / ds, ys)
    d = k.derivatives((s - xs[half]) / ds, der=nder + 1)
    scale = ds ** -np.arange(nder + 1)
    return d * scale.reshape((-1,) + (1,) * (d.ndim - 1))
