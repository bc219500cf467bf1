"""Central-difference assembly with fictitious-value substitution."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import mms
from .geometry import MINUS, PLUS
from .material import eval_field


@dataclass
class SparseSystem:
    """``A u = rhs`` with unknowns ordered ``comp * (nx*ny) + j*nx + i``."""

    A: sp.csr_matrix
    rhs: np.ndarray
    grid: object
    boundary: tuple
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.rhs.size


def unknown_index(grid, comp, i, j):
    return (comp - 1) * grid.n_nodes + j * grid.nx + i


def _per_side(sides, fn):
    """Fill a (ny, nx) pair of arrays by evaluating ``fn(side, mask)`` on each side."""
    out = None
    for s in (PLUS, MINUS):
        mask = sides == s
        if not mask.any():
            continue
        vals = fn(s, mask)
        if out is None:
            out = [np.zeros(sides.shape) for _ in vals]
        for o, v in zip(out, vals):
            o[mask] = v
    return out


def node_values(case, grid, sides, which="exact"):
    """Exact displacement (or force) at each node on the node's own side."""
    X, Y = np.meshgrid(grid.x, grid.y)

    def fn(s, mask):
        p = (X[mask], Y[mask])
        if which == "exact":
            e = mms.eval_exact(case, s, p)
            return e.u1.v + 0.0 * p[0], e.u2.v + 0.0 * p[0]
        f1, f2 = mms.eval_force(case, s, p)
        return f1 + 0.0 * p[0], f2 + 0.0 * p[0]

    return _per_side(sides, fn)


def _stencils(case, grid, sides):
    """Coefficient arrays ``coef[(row, col)][offset]`` and scaled rhs per node."""
    X, Y = np.meshgrid(grid.x, grid.y)
    hx, hy = grid.hx, grid.hy
    names = ("mu", "lam", "nu", "mu_x", "mu_y", "lam_x", "lam_y")
    mat = dict(zip(names, _per_side(sides, lambda s, m: [
        getattr(eval_field(case.field, s, (X[m], Y[m])), k) for k in names])))
    F1, F2 = node_values(case, grid, sides, "force")
    mu, lam = mat["mu"], mat["lam"]
    if case.field.homogeneous:
        nu = mat["nu"]
        zero = np.zeros_like(mu)
        d = {
            (1, 1): dict(xx=2 * (1 - nu), yy=1 - 2 * nu, x=zero, y=zero),
            (1, 2): dict(xy=np.ones_like(mu)),
            (2, 2): dict(xx=1 - 2 * nu, yy=2 * (1 - nu), x=zero, y=zero),
            (2, 1): dict(xy=np.ones_like(mu)),
        }
        rhs = (-F1 / (mu + lam), -F2 / (mu + lam))
    else:
        mx, my, lx, ly = mat["mu_x"], mat["mu_y"], mat["lam_x"], mat["lam_y"]
        d = {
            (1, 1): dict(xx=lam + 2 * mu, yy=mu, x=lx + 2 * mx, y=my),
            (1, 2): dict(xy=lam + mu, y=lx, x=my),
            (2, 2): dict(xx=mu, yy=lam + 2 * mu, x=mx, y=ly + 2 * my),
            (2, 1): dict(xy=lam + mu, y=mx, x=ly),
        }
        rhs = (-F1, -F2)
    ops = {
        "xx": {(-1, 0): 1 / hx ** 2, (0, 0): -2 / hx ** 2, (1, 0): 1 / hx ** 2},
        "yy": {(0, -1): 1 / hy ** 2, (0, 0): -2 / hy ** 2, (0, 1): 1 / hy ** 2},
        "x": {(1, 0): 0.5 / hx, (-1, 0): -0.5 / hx},
        "y": {(0, 1): 0.5 / hy, (0, -1): -0.5 / hy},
        "xy": {(1, 1): 0.25 / (hx * hy), (-1, -1): 0.25 / (hx * hy),
               (-1, 1): -0.25 / (hx * hy), (1, -1): -0.25 / (hx * hy)},
    }
    coef = {}
    for rc, terms in d.items():
        per = {}
        for op, c in terms.items():
            for off, w in ops[op].items():
                per[off] = per.get(off, 0.0) + w * c
        coef[rc] = per
    return coef, rhs


def assemble(grid, classification, table, case) -> SparseSystem:
    """Assemble the global system; cross-side references use ``table`` reps."""
    sides = classification.sides
    ny, nx = sides.shape
    N = grid.n_nodes
    bmask = grid.boundary_mask
    g1, g2 = node_values(case, grid, sides, "exact")
    gvals = (np.where(bmask, g1, 0.0), np.where(bmask, g2, 0.0))
    coef, (r1, r2) = _stencils(case, grid, sides)
    rhs = np.zeros(2 * N)
    rhs[:N] = np.where(bmask, g1, r1).ravel()
    rhs[N:] = np.where(bmask, g2, r2).ravel()

    rows, cols, vals = [], [], []
    bidx = np.flatnonzero(bmask.ravel())
    for comp in (1, 2):
        rows.append(bidx + (comp - 1) * N)
        cols.append(bidx + (comp - 1) * N)
        vals.append(np.ones(bidx.size))

    interior = ~bmask
    jj, ii = np.nonzero(interior)
    spill = []
    for (rc, cc), per in coef.items():
        roff = (rc - 1) * N
        coff = (cc - 1) * N
        for (di, dj), w in per.items():
            wv = np.broadcast_to(w, sides.shape)[jj, ii]
            qi, qj = ii + di, jj + dj
            same = sides[qj, qi] == sides[jj, ii]
            qb = bmask[qj, qi]
            k_row = jj * nx + ii + roff
            m = same & ~qb & (wv != 0)
            rows.append(k_row[m])
            cols.append(qj[m] * nx + qi[m] + coff)
            vals.append(wv[m])
            m = same & qb & (wv != 0)
            np.subtract.at(rhs, k_row[m], wv[m] * gvals[cc - 1][qj[m], qi[m]])
            m = ~same & (wv != 0)
            for a, b, c, w_ in zip(ii[m].tolist(), jj[m].tolist(), k_row[m].tolist(),
                                   wv[m].tolist()):
                spill.append((c, (a, b), (a + di, b + dj), cc, w_))

    srow, scol, sval = [], [], []
    for k_row, P, Q, cc, w in spill:
        rep = table.resolve(P, Q)[cc - 1]
        rhs[k_row] -= w * rep.constant
        for (c, i, j), tw in rep.terms.items():
            if bmask[j, i]:
                rhs[k_row] -= w * tw * gvals[c - 1][j, i]
            else:
                srow.append(k_row)
                scol.append(unknown_index(grid, c, i, j))
                sval.append(w * tw)
    rows.append(np.asarray(srow, dtype=np.int64))
    cols.append(np.asarray(scol, dtype=np.int64))
    vals.append(np.asarray(sval, dtype=float))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(2 * N, 2 * N))
    A.sum_duplicates()
    A.sort_indices()
    return SparseSystem(A, rhs, grid, (g1, g2), {"spill_entries": len(spill),
                                                "form": "scaled" if case.field.homogeneous
                                                else "variable"})


def exact_vector(case, grid, sides):
    u1, u2 = node_values(case, grid, sides, "exact")
    return np.concatenate([u1.ravel(), u2.ravel()])


def dump_matrix(system: SparseSystem, path):
    """Coordinate text format: ``row col value`` per line (0-based)."""
    coo = system.A.tocoo()
    with open(path, "w") as fh:
        fh.write(f"% {system.n} {system.n} {coo.nnz}\n")
        for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            fh.write(f"{r} {c} {v:.17g}\n")


__all__ = ["SparseSystem", "assemble", "unknown_index", "exact_vector", "node_values",
           "dump_matrix"]
