"""Log-log slope fits for asymptotic decay orders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EXACT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    residual: float        # rms of the log-log fit
    stderr: float          # standard error of the slope
    exact: bool = False

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "residual": self.residual,
                "stderr": self.stderr, "exact": self.exact}


def decay_order(t, values, min_samples: int = 6, min_decades: float = 1.5) -> DecayFit:
    """Least-squares fit ``log|value| = slope·log t + intercept``.

    If every ``|value|`` is below ``1e-12`` the quantity is treated as
    identically zero and an ``exact`` fit (infinite slope) is returned.
    """
    t = np.asarray(t, dtype=float)
    a = np.abs(np.asarray(values, dtype=float))
    if t.size != a.size or t.size < min_samples:
        raise ValueError(f"need at least {min_samples} paired samples")
    if np.any(t <= 0):
        raise ValueError("sample abscissae must be positive")
    if np.log10(t.max() / t.min()) < min_decades - 1e-9:
        raise ValueError(f"samples must span at least {min_decades} decades")
    if np.all(a < EXACT_THRESHOLD):
        return DecayFit(np.inf, -np.inf, 0.0, 0.0, exact=True)
    if np.any(a == 0):
        raise ValueError("zero value in a non-exact sample set")
    X = np.column_stack([np.log(t), np.ones_like(t)])
    y = np.log(a)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ coef
    dof = max(t.size - 2, 1)
    s2 = float(r @ r) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    return DecayFit(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(r * r))),
                    float(np.sqrt(cov[0, 0])))


def default_window(lo: float = 1e-3, hi: float = 10**-1.5, n: int = 12) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), n)
