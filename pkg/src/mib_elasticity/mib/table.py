"""Per-grid table of fictitious reps and the lookup used by assembly."""
from __future__ import annotations

import logging
import math
from collections import Counter

import numpy as np

from ..errors import InsufficientSupport, MissingRep, NoDonors, Singular
from ..geometry import MINUS, PLUS
from ..grid import AXIS_OFFSETS, DIAG_OFFSETS, NINE_OFFSETS
from ..material import eval_field
from .jump import SideModuli, on_axis
from .reps import (FictitiousRep, fictitious_disassociate, fictitious_extrapolate,
                   fictitious_irregular, fictitious_regular)

log = logging.getLogger(__name__)


def side_moduli(field, side, p) -> SideModuli:
    m = eval_field(field, side, p)
    return SideModuli(float(m.M), float(m.mu), float(m.lam))


class RepTable:
    """Primary reps from every crossing, plus resolution of stencil references.

    ``jump_fn(crossing)`` must return an object with ``b``, ``T`` and
    ``db_dtau``.
    """

    def __init__(self, grid, classification, crossings, field, jump_fn, curve=None):
        self.grid = grid
        self.cls = classification
        self.sides = classification.sides
        self.crossings = crossings
        self.by_edge = {}
        self.by_node = {}
        self.failures = {}
        self.stats = Counter()
        for c in crossings:
            self._build(c, field, jump_fn, curve)
        self._cache = {}

    def _build(self, c, field, jump_fn, curve):
        p = c.position
        plus, minus = side_moduli(field, PLUS, p), side_moduli(field, MINUS, p)
        jumps = jump_fn(c)
        try:
            if on_axis(c.theta):
                reps = fictitious_regular(c, self.grid, self.sides, plus, minus, jumps, curve)
                self.stats["regular"] += 1
            else:
                reps = fictitious_irregular(c, self.grid, self.sides, plus, minus, jumps,
                                            curve=curve)
                self.stats["irregular"] += 1
        except (InsufficientSupport, Singular) as e:
            self.failures[c.nodes()] = str(e)
            self.stats["failed"] += 1
            return
        self.by_edge[c.nodes()] = reps
        for key, pair in reps.items():
            self.by_node.setdefault(key, []).append((c, pair))

    # --- lookup -----------------------------------------------------------

    def primary(self, node, side):
        return self.by_node.get((node, side), [])

    def _nearest_primary(self, node, side, ref):
        cands = self.primary(node, side)
        if not cands:
            return None
        rx, ry = self.grid.node(*ref)
        c, pair = min(cands, key=lambda cp: (math.hypot(cp[0].x - rx, cp[0].y - ry),
                                             cp[0].axis, cp[0].line, cp[0].segment))
        return pair

    def _extrapolate(self, node, side):
        i0, j0 = node
        best = None
        # diagonal lines only as a fallback for thin features
        for di, dj in AXIS_OFFSETS + DIAG_OFFSETS:
            donors = ([], [])
            ok = True
            for m in (1, 2, 3):
                q = (i0 + m * di, j0 + m * dj)
                if not self.grid.inside(*q):
                    ok = False
                    break
                if self.sides[q[1], q[0]] == side:
                    for comp in (1, 2):
                        donors[comp - 1].append((comp, q[0], q[1]))
                else:
                    pair = self._nearest_primary(q, side, node)
                    if pair is None:
                        ok = False
                        break
                    for comp in (1, 2):
                        donors[comp - 1].append(pair[comp - 1])
            if not ok:
                continue
            score = (di != 0 and dj != 0, sum(isinstance(d, FictitiousRep) for d in donors[0]))
            if best is None or score < best[0]:
                best = (score, donors)
        if best is None:
            raise NoDonors(f"no extrapolation line for node {node} on side {side:+d}")
        return tuple(fictitious_extrapolate(node, comp, side, best[1][comp - 1])
                     for comp in (1, 2))

    def resolve(self, P, Q):
        """Reps ``(u1, u2)`` for the extension of ``P``'s side to node ``Q``."""
        side = int(self.sides[P[1], P[0]])
        key = (P, Q)
        if key in self._cache:
            return self._cache[key]
        di, dj = Q[0] - P[0], Q[1] - P[1]
        pair = None
        if di == 0 or dj == 0:
            lo, hi = (P, Q) if (P[0] + P[1]) < (Q[0] + Q[1]) else (Q, P)
            reps = self.by_edge.get((lo, hi))
            if reps is not None:
                pair = reps[(Q, side)]
                self.stats["axis"] += 1
            else:
                avail = self.primary(Q, side)
                if avail:
                    pair = fictitious_disassociate(
                        Q, side, [((Q, side), self._nearest_primary(Q, side, P))])
                    self.stats["disassociate"] += 1
        else:
            pair = self._nearest_primary(Q, side, P)
            if pair is not None:
                self.stats["diagonal"] += 1
        if pair is None:
            try:
                pair = self._extrapolate(Q, side)
            except NoDonors as e:
                x, y = self.grid.node(*P)
                raise MissingRep(f"node {P} at ({x:.6g}, {y:.6g}) needs side {side:+d} "
                                 f"value at {Q}: {e}") from e
            self.stats["extrapolate"] += 1
            self.stats["scheme_" + pair[0].meta["scheme"]] += 1
        self._cache[key] = pair
        return pair

    def resolve_all(self):
        """Resolve every cross-side reference of every interior node."""
        out = {}
        opp = {o: self.cls.opposite(o) for o in NINE_OFFSETS}
        for o in NINE_OFFSETS:
            js, is_ = np.nonzero(opp[o])
            for i, j in zip(is_.tolist(), js.tolist()):
                P, Q = (i, j), (i + o[0], j + o[1])
                out[(P, Q)] = self.resolve(P, Q)
        return out


def dump_reps(table: RepTable, path, resolved=None):
    """Line-oriented listing: ``owner_i owner_j side comp source constant`` then terms."""
    resolved = table.resolve_all() if resolved is None else resolved
    with open(path, "w") as fh:
        for (P, Q), pair in sorted(resolved.items()):
            for r in pair:
                fh.write(f"rep for={P[0]},{P[1]} at={Q[0]},{Q[1]} side={r.side:+d} "
                         f"comp={r.comp} source={r.source} constant={r.constant:.17g}\n")
                for (i, j), c, w in r.term_list():
                    fh.write(f"  {i} {j} {c} {w:.17g}\n")


__all__ = ["RepTable", "dump_reps", "side_moduli"]
