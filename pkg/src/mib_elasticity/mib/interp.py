"""Three-point Lagrange weights for values and first derivatives."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CoincidentNodes

COINCIDE_TOL = 1e-14


@dataclass(frozen=True)
class InterpolationWeights:
    nodes: tuple
    target: float
    w0: np.ndarray
    w1: np.ndarray


def lagrange_weights(nodes, target: float) -> InterpolationWeights:
    """Lagrange basis values ``w0`` and slopes ``w1`` at ``target``."""
    z = np.asarray(nodes, dtype=float)
    n = z.size
    for a in range(n):
        for b in range(a + 1, n):
            if abs(z[a] - z[b]) < COINCIDE_TOL:
                raise CoincidentNodes(f"nodes {z[a]} and {z[b]} coincide")
    t = float(target)
    w0 = np.empty(n)
    w1 = np.empty(n)
    for k in range(n):
        others = np.delete(z, k)
        denom = np.prod(z[k] - others)
        w0[k] = np.prod(t - others) / denom
        # d/dt prod(t - z_m) = sum_m prod_{l != m}(t - z_l)
        s = 0.0
        for m in range(others.size):
            s += np.prod(np.delete(t - others, m))
        w1[k] = s / denom
    return InterpolationWeights(tuple(z.tolist()), t, w0, w1)


def extrapolation_weights(offsets=(1, 2, 3)) -> np.ndarray:
    """Weights that extrapolate donors at ``offsets`` (in grid steps) to offset 0."""
    return lagrange_weights(offsets, 0.0).w0

__all__ = ["InterpolationWeights", "lagrange_weights", "extrapolation_weights"]
