"""The 4x8 interface system and its elimination variants.

Derivative vector ordering ``C``:
``(u1x+, u1x-, u1y+, u1y-, u2x+, u2x-, u2y+, u2y-)``.
Rows 1-2 are the tangential derivative jumps, rows 3-4 the traction jumps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import Singular
from ..geometry import MINUS, PLUS

C_ORDER = ("u1x+", "u1x-", "u1y+", "u1y-", "u2x+", "u2x-", "u2y+", "u2y-")
AXIS_ANGLES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi)
PIVOT_TOL = 1e-12


def column(comp: int, deriv: str, side: int) -> int:
    """Index into ``C`` for component 1/2, derivative 'x'/'y' and side."""
    return 4 * (comp - 1) + (0 if deriv == "x" else 2) + (0 if side == PLUS else 1)


class Drop(Enum):
    """Pair of derivatives removed by elimination."""

    Y_MINUS = ("y", MINUS)
    Y_PLUS = ("y", PLUS)
    X_MINUS = ("x", MINUS)
    X_PLUS = ("x", PLUS)

    @property
    def deriv(self):
        return self.value[0]

    @property
    def side(self):
        return self.value[1]

    @property
    def columns(self):
        return (column(1, self.deriv, self.side), column(2, self.deriv, self.side))

    @classmethod
    def of(cls, deriv, side):
        return cls((deriv, side))


@dataclass(frozen=True)
class SideModuli:
    M: float
    mu: float
    lam: float


@dataclass(frozen=True)
class JumpSystem:
    theta: float
    plus: SideModuli
    minus: SideModuli
    A: np.ndarray
    rhs: np.ndarray


def jump_matrix(theta: float, plus: SideModuli, minus: SideModuli) -> np.ndarray:
    s, c = math.sin(theta), math.cos(theta)
    P, m = plus, minus
    return np.array([
        [-s, s, c, -c, 0, 0, 0, 0],
        [0, 0, 0, 0, -s, s, c, -c],
        [P.M * c, -m.M * c, P.mu * s, -m.mu * s, P.mu * s, -m.mu * s, P.lam * c, -m.lam * c],
        [P.lam * s, -m.lam * s, P.mu * c, -m.mu * c, P.mu * c, -m.mu * c, P.M * s, -m.M * s],
    ], dtype=float)


def build_jump_system(theta: float, plus: SideModuli, minus: SideModuli,
                      traction=(0.0, 0.0), tangential=(0.0, 0.0)) -> JumpSystem:
    """Assemble ``A C = rhs`` with ``rhs = (db1/dtau, db2/dtau, phi, psi)``.

    The first two entries vanish unless the displacement jump varies along
    the interface.
    """
    A = jump_matrix(theta, plus, minus)
    rhs = np.array([tangential[0], tangential[1], traction[0], traction[1]], dtype=float)
    return JumpSystem(float(theta), plus, minus, A, rhs)


def pivot(system: JumpSystem, drop: Drop) -> float:
    """Scalar ``p`` with ``A[0:2, dropped] = p * I``."""
    blk = system.A[0:2, list(drop.columns)]
    return float(blk[0, 0])


def eliminate(system: JumpSystem, drop: Drop, pivot_tol: float = PIVOT_TOL):
    """Two combined conditions free of the dropped derivative pair.

    Returns ``(rows, rhs)`` with ``rows`` of shape (2, 8).  The combination is
    ``p * A[2:4] - Q * A[0:2]`` where ``p * I`` is the tangential block on the
    dropped columns and ``Q`` the traction block there, so the dropped
    columns cancel exactly.
    """
    A, r = system.A, system.rhs
    cols = list(drop.columns)
    blk = A[0:2, cols]
    if abs(blk[0, 1]) > 0 or abs(blk[1, 0]) > 0 or blk[0, 0] != blk[1, 1]:
        raise Singular("tangential block is not a multiple of the identity")
    p = blk[0, 0]
    if abs(p) < pivot_tol:
        raise Singular(f"pivot {p:.3e} vanishes at theta={system.theta:.6f}")
    Q = A[2:4, cols]
    rows = p * A[2:4] - Q @ A[0:2]
    rhs = p * r[2:4] - Q @ r[0:2]
    rows[:, cols] = 0.0
    return rows, rhs


def printed_first_set(theta, plus: SideModuli, minus: SideModuli):
    """Closed-form combined rows after dropping ``u1y-`` and ``u2y-``.

    Reference transcription used only for cross-checking ``eliminate``.  The
    rows pair with right-hand sides ``(-phi cos, -psi cos)``; the ``u2y+``
    entry of the first row is ``(lam- - lam+) cos^2``.
    """
    s, c = math.sin(theta), math.cos(theta)
    P, m = plus, minus
    r1 = [-P.M * c * c - m.mu * s * s, m.M * c * c + m.mu * s * s,
          (m.mu - P.mu) * s * c, 0.0,
          -(m.lam + P.mu) * s * c, (m.lam + m.mu) * s * c,
          (m.lam - P.lam) * c * c, 0.0]
    r2 = [-(P.lam + m.mu) * s * c, (m.lam + m.mu) * s * c,
          (m.mu - P.mu) * c * c, 0.0,
          -P.mu * c * c - m.M * s * s, m.mu * c * c + m.M * s * s,
          (m.M - P.M) * s * c, 0.0]
    return np.array([r1, r2])


def on_axis(theta: float, tol: float = 1e-8) -> bool:
    return any(abs(theta - a) <= tol for a in AXIS_ANGLES)


def snap_angle(theta: float, tol: float = 1e-8) -> float:
    for a in AXIS_ANGLES:
        if abs(theta - a) <= tol:
            return a % (2 * math.pi)
    return theta


__all__ = ["C_ORDER", "column", "Drop", "SideModuli", "JumpSystem", "jump_matrix",
           "build_jump_system", "eliminate", "pivot", "printed_first_set", "on_axis",
           "snap_angle"]
