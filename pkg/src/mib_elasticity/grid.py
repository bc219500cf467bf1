"""Uniform Cartesian grid and node regularity classification."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadSpec
from .geometry import MINUS, PLUS

AXIS_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))
DIAG_OFFSETS = ((-1, -1), (1, -1), (-1, 1), (1, 1))
NINE_OFFSETS = AXIS_OFFSETS + DIAG_OFFSETS


@dataclass(frozen=True)
class GridSpec:
    a: float
    b: float
    c: float
    d: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 5 or self.ny < 5:
            raise BadSpec(f"need at least 5 nodes per direction, got {self.nx}x{self.ny}")
        if not (self.b > self.a and self.d > self.c):
            raise BadSpec("domain bounds are inverted")

    @property
    def hx(self):
        return (self.b - self.a) / (self.nx - 1)

    @property
    def hy(self):
        return (self.d - self.c) / (self.ny - 1)


class Grid:
    """Node coordinates follow ``x_i = a + i*hx``, ``y_j = c + j*hy`` (0-based)."""

    def __init__(self, spec: GridSpec):
        self.spec = spec
        self.nx, self.ny = spec.nx, spec.ny
        self.hx, self.hy = spec.hx, spec.hy
        self.x = spec.a + np.arange(spec.nx) * self.hx
        self.y = spec.c + np.arange(spec.ny) * self.hy

    @property
    def n_nodes(self):
        return self.nx * self.ny

    def node(self, i, j):
        return (self.x[i], self.y[j])

    def flat(self, i, j):
        return j * self.nx + i

    def unflat(self, k):
        return k % self.nx, k // self.nx

    def is_boundary(self, i, j):
        return i == 0 or j == 0 or i == self.nx - 1 or j == self.ny - 1

    def inside(self, i, j):
        return 0 <= i < self.nx and 0 <= j < self.ny

    @cached_property
    def boundary_mask(self):
        m = np.zeros((self.ny, self.nx), dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m


def build_grid(spec: GridSpec) -> Grid:
    return Grid(spec)


@dataclass(frozen=True)
class NodeClassification:
    side: int
    irregular5: bool
    irregular9: bool
    fictitious_needed: frozenset


class Classification:
    """Per-node sides and stencil regularity, stored as (ny, nx) arrays."""

    def __init__(self, grid: Grid, sides: np.ndarray):
        self.grid = grid
        self.sides = sides
        ny, nx = sides.shape
        opp = {}
        pad = np.pad(sides, 1, mode="edge")
        for di, dj in NINE_OFFSETS:
            nb = pad[1 + dj:1 + dj + ny, 1 + di:1 + di + nx]
            opp[(di, dj)] = (nb != sides) & ~grid.boundary_mask
        self._opposite = opp
        self.irregular5 = np.logical_or.reduce([opp[o] for o in AXIS_OFFSETS])
        self.irregular9 = np.logical_or.reduce([opp[o] for o in NINE_OFFSETS])

    def side(self, i, j):
        return int(self.sides[j, i])

    def opposite(self, offset):
        return self._opposite[offset]

    def __getitem__(self, node):
        i, j = node
        need = frozenset(o for o in NINE_OFFSETS if self._opposite[o][j, i])
        return NodeClassification(int(self.sides[j, i]), bool(self.irregular5[j, i]),
                                  bool(self.irregular9[j, i]), need)

    def irregular_nodes(self, nine=True):
        mask = self.irregular9 if nine else self.irregular5
        js, is_ = np.nonzero(mask)
        return list(zip(is_.tolist(), js.tolist()))


def classify_nodes(grid: Grid, curve) -> Classification:
    """Classify all nodes; a missing curve puts every node on the plus side."""
    if curve is None:
        sides = np.full((grid.ny, grid.nx), PLUS, dtype=np.int8)
    else:
        sides = curve.classify_grid(grid.x, grid.y)
    return Classification(grid, sides)


__all__ = ["GridSpec", "Grid", "build_grid", "NodeClassification", "Classification",
           "classify_nodes", "PLUS", "MINUS", "AXIS_OFFSETS", "DIAG_OFFSETS", "NINE_OFFSETS"]
