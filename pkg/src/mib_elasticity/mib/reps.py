"""Fictitious-value representations at interface crossings.

A crossing between nodes ``L`` (side ``sL``) and ``R`` (side ``sR``) on a
mesh line produces four fictitious values: the ``sL`` extension at ``R`` and
the ``sR`` extension at ``L``, for both displacement components.  They solve
two value-jump conditions and two combined derivative conditions in which
the transverse derivatives on one side have been eliminated.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InsufficientSupport, NoDonorRep, NoDonors, Singular
from ..geometry import MINUS, PLUS, CrossingPoint
from .interp import extrapolation_weights, lagrange_weights
from .jump import Drop, SideModuli, build_jump_system, column, eliminate, on_axis, snap_angle

log = logging.getLogger(__name__)

COND_LIMIT = 1e10


class Affine:
    """``sum(terms) + z . coeffs + const`` over real unknowns and four fictitious unknowns.

    Term keys are ``(comp, i, j)`` with ``comp`` in {1, 2}.
    """

    __slots__ = ("terms", "z", "const")

    def __init__(self, terms=None, z=None, const=0.0):
        self.terms = dict(terms) if terms else {}
        self.z = np.zeros(4) if z is None else np.asarray(z, dtype=float)
        self.const = float(const)

    @classmethod
    def unknown(cls, comp, node):
        return cls({(comp, node[0], node[1]): 1.0})

    @classmethod
    def fictitious(cls, k):
        z = np.zeros(4)
        z[k] = 1.0
        return cls(z=z)

    def __add__(self, other):
        out = Affine(self.terms, self.z + other.z, self.const + other.const)
        for k, w in other.terms.items():
            out.terms[k] = out.terms.get(k, 0.0) + w
        return out

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, a):
        a = float(a)
        return Affine({k: a * w for k, w in self.terms.items()}, a * self.z, a * self.const)

    __rmul__ = __mul__

    def shift(self, c):
        return Affine(self.terms, self.z, self.const + c)


def combine(weights, exprs):
    out = Affine()
    for w, e in zip(weights, exprs):
        if w != 0.0:
            out = out + e * w
    return out


@dataclass
class FictitiousRep:
    """Extension of side ``side``'s component ``comp`` to grid node ``owner``."""

    owner: tuple
    comp: int
    side: int
    terms: dict
    constant: float
    source: str = "crossing"
    meta: dict = field(default_factory=dict)

    def term_list(self):
        return [((i, j), c, w) for (c, i, j), w in sorted(self.terms.items())]

    def evaluate(self, u1, u2):
        """Value for nodal arrays ``u1``, ``u2`` indexed ``[j, i]``."""
        fields = (u1, u2)
        return self.constant + sum(w * fields[c - 1][j, i] for (c, i, j), w in self.terms.items())

    def scaled(self, a):
        return FictitiousRep(self.owner, self.comp, self.side,
                             {k: a * w for k, w in self.terms.items()}, a * self.constant,
                             self.source, dict(self.meta))


# --- local frame helpers ---------------------------------------------------

class _Frame:
    """Maps (along, transverse) indices on a crossing's mesh line to grid (i, j)."""

    def __init__(self, crossing: CrossingPoint, grid, sides):
        self.c = crossing
        self.sides = sides
        self.main = crossing.axis
        self.trans = "y" if crossing.axis == "x" else "x"
        if crossing.axis == "x":
            self.along, self.across = grid.x, grid.y
            self.h_along, self.h_across = grid.hx, grid.hy
            self.pos = crossing.x
        else:
            self.along, self.across = grid.y, grid.x
            self.h_along, self.h_across = grid.hy, grid.hx
            self.pos = crossing.y
        self.na, self.nt = self.along.size, self.across.size
        self.t0 = crossing.line
        self.aL = crossing.segment
        self.aR = crossing.segment + 1

    def node(self, a, t):
        return (a, t) if self.main == "x" else (t, a)

    def side(self, a, t):
        i, j = self.node(a, t)
        return int(self.sides[j, i])

    def point(self, a_coord, t):
        return (a_coord, self.across[t]) if self.main == "x" else (self.across[t], a_coord)


def _aux_window(fr: _Frame, t: int, side: int):
    """Same-side nodes on transverse line ``t`` for interpolating at ``fr.pos``.

    Returns ``(indices, weights, linear)`` or ``None``.
    """
    if not 0 <= t < fr.nt:
        return None
    h = fr.h_along
    k = int(math.floor((fr.pos - fr.along[0]) / h))
    best = None
    for size, reach in ((3, 3.0), (2, 2.0)):
        for start in range(k - size + 1, k + 2):
            idx = list(range(start, start + size))
            if idx[0] < 0 or idx[-1] >= fr.na:
                continue
            if any(fr.side(a, t) != side for a in idx):
                continue
            dist = max(abs(fr.along[a] - fr.pos) for a in idx)
            if dist > reach * h * (1 + 1e-9):
                continue
            if best is None or dist < best[0]:
                best = (dist, idx)
        if best is not None:
            idx = best[1]
            w = lagrange_weights([fr.along[a] for a in idx], fr.pos).w0
            return idx, w, size == 2, best[0]
    return None


@dataclass
class _Choice:
    keep: int
    direction: int
    windows: list
    linear: bool
    score: tuple


def _candidates(fr: _Frame, curve=None, prefer=MINUS):
    out = []
    for keep in (MINUS, PLUS):
        # direction 0 is the centred pair of lines t0 - 1, t0 + 1
        for d in (0, 1, -1):
            offs = (-1, 1) if d == 0 else (d, 2 * d)
            wins = [_aux_window(fr, fr.t0 + m, keep) for m in offs]
            if any(w is None for w in wins):
                continue
            on_side = 0
            if curve is not None:
                for m in offs:
                    x, y = fr.point(fr.pos, fr.t0 + m)
                    on_side += int(curve.side(x, y) == keep)
            linear = any(w[2] for w in wins)
            reach = max(w[3] for w in wins)
            score = (linear, keep != prefer, d != 0, -on_side, round(reach / fr.h_along, 6),
                     d != 1)
            out.append(_Choice(keep, d, wins, linear, score))
    out.sort(key=lambda c: c.score)
    return out


def _main_expressions(fr: _Frame, sL: int, sR: int):
    """Value and along-derivative expressions on both sides at the crossing."""
    aL, aR, t = fr.aL, fr.aR, fr.t0
    if aL - 1 < 0 or fr.side(aL - 1, t) != sL:
        raise InsufficientSupport(f"no third {sL:+d} node left of crossing at {fr.c.position}")
    if aR + 1 >= fr.na or fr.side(aR + 1, t) != sR:
        raise InsufficientSupport(f"no third {sR:+d} node right of crossing at {fr.c.position}")
    wl = lagrange_weights([fr.along[aL - 1], fr.along[aL], fr.along[aR]], fr.pos)
    wr = lagrange_weights([fr.along[aL], fr.along[aR], fr.along[aR + 1]], fr.pos)
    val, der = {}, {}
    for comp in (1, 2):
        # z[0:2]: side sL at R; z[2:4]: side sR at L
        left = [Affine.unknown(comp, fr.node(aL - 1, t)), Affine.unknown(comp, fr.node(aL, t)),
                Affine.fictitious(comp - 1)]
        right = [Affine.fictitious(2 + comp - 1), Affine.unknown(comp, fr.node(aR, t)),
                 Affine.unknown(comp, fr.node(aR + 1, t))]
        val[(sL, comp)] = combine(wl.w0, left)
        der[(sL, comp)] = combine(wl.w1, left)
        val[(sR, comp)] = combine(wr.w0, right)
        der[(sR, comp)] = combine(wr.w1, right)
    return val, der


def _transverse_derivative(fr: _Frame, ch: _Choice, base: Affine, comp: int):
    d = ch.direction
    offs = (-1, 1) if d == 0 else (d, 2 * d)
    pts = []
    for m, (idx, w, _, _) in zip(offs, ch.windows):
        pts.append(combine(w, [Affine.unknown(comp, fr.node(a, fr.t0 + m)) for a in idx]))
    h = fr.h_across
    w1 = lagrange_weights([0.0] + [m * h for m in offs], 0.0).w1
    return combine(w1, [base] + pts)


def crossing_reps(crossing: CrossingPoint, grid, sides, plus: SideModuli, minus: SideModuli,
                  jumps, curve=None, choice: Optional[Drop] = None, theta: Optional[float] = None):
    """Four fictitious reps at the nodes straddling ``crossing``.

    ``jumps`` supplies ``b``, ``T`` and ``db_dtau``.  ``choice`` forces the
    eliminated derivative pair; otherwise candidates are tried softer side
    first, centred auxiliary lines before one-sided ones.  Returns a dict keyed by ``(node, side)``
    holding the ``(u1, u2)`` reps.
    """
    fr = _Frame(crossing, grid, sides)
    L, R = fr.node(fr.aL, fr.t0), fr.node(fr.aR, fr.t0)
    sL, sR = fr.side(fr.aL, fr.t0), fr.side(fr.aR, fr.t0)
    if sL == sR:
        raise ValueError("crossing does not separate its end nodes")
    th = crossing.theta if theta is None else theta
    val, der = _main_expressions(fr, sL, sR)
    system = build_jump_system(th, plus, minus, jumps.T, jumps.db_dtau)

    # keeping the softer side's transverse derivatives gives the stiff-scale
    # coefficients to both sides after elimination
    prefer = PLUS if plus.mu < minus.mu else MINUS
    cands = _candidates(fr, curve, prefer)
    if choice is not None:
        if choice.deriv != fr.trans:
            raise ValueError(f"choice {choice} does not eliminate the transverse derivative")
        cands = [c for c in cands if c.keep == -choice.side]
    if not cands:
        raise InsufficientSupport(f"no auxiliary support at crossing {crossing.position}")
    last_err = None
    for ch in cands:
        drop = Drop.of(fr.trans, -ch.keep)
        try:
            rows, rhs = eliminate(system, drop)
        except Singular as e:
            last_err = e
            continue
        exprs = {}
        for comp in (1, 2):
            for s in (PLUS, MINUS):
                exprs[column(comp, fr.main, s)] = der[(s, comp)]
            exprs[column(comp, fr.trans, ch.keep)] = _transverse_derivative(
                fr, ch, val[(ch.keep, comp)], comp)
        eqs = [val[(PLUS, 1)] - val[(MINUS, 1)] - Affine(const=jumps.b[0]),
               val[(PLUS, 2)] - val[(MINUS, 2)] - Affine(const=jumps.b[1])]
        for r in range(2):
            e = Affine(const=-rhs[r])
            for col, expr in exprs.items():
                if rows[r, col] != 0.0:
                    e = e + expr * rows[r, col]
            eqs.append(e)
        G = np.array([e.z for e in eqs])
        scale = np.max(np.abs(G), axis=1)
        if np.any(scale == 0.0):
            last_err = Singular("degenerate fictitious system")
            continue
        Gs = G / scale[:, None]
        if np.linalg.cond(Gs) > COND_LIMIT:
            last_err = Singular(f"ill-conditioned fictitious system at {crossing.position}")
            continue
        Ginv = np.linalg.inv(Gs)
        # z = -Ginv (real terms + const) / scale
        out = {}
        owners = [(R, sL, 1), (R, sL, 2), (L, sR, 1), (L, sR, 2)]
        meta = {"keep": ch.keep, "direction": ch.direction, "linear": ch.linear,
                "drop": drop.name, "theta": th}
        if ch.linear:
            log.warning("linear auxiliary interpolation at crossing %s", crossing.position)
        for m, (node, s, comp) in enumerate(owners):
            terms = {}
            const = 0.0
            for n, e in enumerate(eqs):
                a = -Ginv[m, n] / scale[n]
                if a == 0.0:
                    continue
                for k, w in e.terms.items():
                    terms[k] = terms.get(k, 0.0) + a * w
                const += a * e.const
            out.setdefault((node, s), [None, None])[comp - 1] = FictitiousRep(
                node, comp, s, terms, const, "crossing", meta)
        return {k: tuple(v) for k, v in out.items()}
    raise last_err if last_err is not None else InsufficientSupport("no admissible elimination")


def fictitious_regular(crossing, grid, sides, plus, minus, jumps, curve=None, tol=1e-8):
    """Reps for an interface locally aligned with the mesh (normal on an axis)."""
    if not on_axis(crossing.theta, tol):
        raise ValueError(f"theta={crossing.theta} is not axis aligned")
    return crossing_reps(crossing, grid, sides, plus, minus, jumps, curve,
                         theta=snap_angle(crossing.theta, tol))


def fictitious_irregular(crossing, grid, sides, plus, minus, jumps, choice=None, curve=None):
    """Reps for a general crossing using one of the four elimination variants."""
    return crossing_reps(crossing, grid, sides, plus, minus, jumps, curve, choice)


def fictitious_disassociate(node, side, available):
    """Borrow a rep pair built along the other axis for ``node``'s blocked direction."""
    for key, pair in available:
        if key == (node, side):
            return tuple(FictitiousRep(r.owner, r.comp, r.side, r.terms, r.constant,
                                       "disassociate", dict(r.meta)) for r in pair)
    raise NoDonorRep(f"no fictitious rep for node {node} on side {side:+d}")


def extrapolation_scheme(donors) -> str:
    n = sum(isinstance(d, FictitiousRep) for d in donors)
    return {0: "0", 1: "I", 2: "II", 3: "III"}[n]


def fictitious_extrapolate(node, comp: int, side: int, donors, offsets=(1, 2, 3)):
    """Quadratic extrapolation to ``node`` from three donors on one mesh line.

    Each donor is either a grid key ``(comp, i, j)`` holding a true unknown or
    a :class:`FictitiousRep`.  The scheme label counts the rep donors.
    """
    if len(donors) < 3:
        raise NoDonors(f"node {node} has only {len(donors)} donors")
    w = extrapolation_weights(offsets)
    terms, const = {}, 0.0
    for wk, d in zip(w, donors):
        if isinstance(d, FictitiousRep):
            for k, v in d.terms.items():
                terms[k] = terms.get(k, 0.0) + wk * v
            const += wk * d.constant
        else:
            terms[d] = terms.get(d, 0.0) + wk
    return FictitiousRep(node, comp, side, terms, const, "extrapolate",
                         {"scheme": extrapolation_scheme(donors)})


__all__ = ["Affine", "FictitiousRep", "crossing_reps", "fictitious_regular",
           "fictitious_irregular", "fictitious_disassociate", "fictitious_extrapolate",
           "extrapolation_scheme"]
