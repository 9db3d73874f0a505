"""Conformal geodesics, minimal-surface extensions and renormalized area."""
