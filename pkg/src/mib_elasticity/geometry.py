"""Interface curves, point classification and mesh-line crossings.

Every curve exposes a signed indicator that is negative on the minus side
and positive on the plus side.  The basic shapes put the minus side inside
the curve; :class:`Complement` swaps the two.  The unit normal always points
from the minus side to the plus side.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateNormal, MultiCross, NoBracket

log = logging.getLogger(__name__)

PLUS = 1
MINUS = -1
ON_INTERFACE = 0

SNAP_TOL = 1e-10
ROOT_TOL = 1e-12
MAX_BISECT = 200
TWO_PI = 2.0 * math.pi


class InterfaceCurve:
    """Base class; subclasses provide ``indicator`` and ``gradient``."""

    scale = 1.0

    def indicator(self, x, y):
        raise NotImplementedError

    def gradient(self, x, y):
        raise NotImplementedError

    def normal(self, x, y):
        gx, gy = self.gradient(x, y)
        g = math.hypot(gx, gy)
        if g < 1e-12:
            raise DegenerateNormal(f"|grad| = {g:.3e} at ({x:.6g}, {y:.6g})")
        return gx / g, gy / g

    def classify_grid(self, xs, ys):
        """Side (+1/-1) of every node of the tensor grid, shape (ny, nx).

        Nodes within the snapping tolerance count as minus.
        """
        X, Y = np.meshgrid(xs, ys)
        ind = self.indicator(X, Y)
        return np.where(ind > SNAP_TOL * self.scale, PLUS, MINUS).astype(np.int8)

    def side(self, x, y):
        return int(self.classify_grid(np.array([x]), np.array([y]))[0, 0])

    def near_mask(self, xs, ys):
        """Tensor-grid nodes within the snapping distance of the curve."""
        X, Y = np.meshgrid(xs, ys)
        return np.abs(self.indicator(X, Y)) <= SNAP_TOL * self.scale

    def locate(self, p0, p1, s0, s1):
        """Root of the indicator on the segment p0-p1 (endpoint sides s0 != s1)."""
        f0 = float(self.indicator(*p0))
        f1 = float(self.indicator(*p1))
        tol = SNAP_TOL * self.scale
        if abs(f0) <= tol:
            return p0
        if abs(f1) <= tol:
            return p1
        if f0 * f1 > 0:
            raise NoBracket(f"no sign change between {p0} and {p1}")
        a, b = 0.0, 1.0
        fa = f0
        px, py = p0
        dx, dy = p1[0] - p0[0], p1[1] - p0[1]
        t = 0.5
        for _ in range(MAX_BISECT):
            t = 0.5 * (a + b)
            ft = float(self.indicator(px + t * dx, py + t * dy))
            if abs(ft) <= ROOT_TOL * self.scale or (b - a) < 1e-16:
                break
            if (ft < 0) == (fa < 0):
                a, fa = t, ft
            else:
                b = t
        return (px + t * dx, py + t * dy)


@dataclass(frozen=True)
class Circle(InterfaceCurve):
    r0: float
    cx: float = 0.0
    cy: float = 0.0

    @property
    def scale(self):
        return self.r0

    def indicator(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 - self.r0 ** 2

    def gradient(self, x, y):
        return 2.0 * (x - self.cx), 2.0 * (y - self.cy)


@dataclass(frozen=True)
class Ellipse(InterfaceCurve):
    """Level set ``a x^2 + b y^2 = r^2``."""

    a: float
    b: float
    r: float

    @property
    def scale(self):
        return self.r * self.r

    def indicator(self, x, y):
        return self.a * x * x + self.b * y * y - self.r * self.r

    def gradient(self, x, y):
        return 2.0 * self.a * x, 2.0 * self.b * y


@dataclass(frozen=True)
class Flower(InterfaceCurve):
    """Polar curve ``rho = base + amp * sin(lobes * theta)``."""

    base: float
    amp: float
    lobes: int

    @property
    def scale(self):
        return self.base

    def indicator(self, x, y):
        rho = np.hypot(x, y)
        th = np.arctan2(y, x)
        return rho - self.base - self.amp * np.sin(self.lobes * th)

    def gradient(self, x, y):
        rho2 = x * x + y * y
        rho = math.sqrt(rho2)
        th = math.atan2(y, x)
        c = self.amp * self.lobes * math.cos(self.lobes * th)
        return x / rho + c * y / rho2, y / rho - c * x / rho2

    def radius(self, theta):
        return self.base + self.amp * np.sin(self.lobes * theta)


@dataclass(frozen=True)
class Implicit(InterfaceCurve):
    """Arbitrary level function; the gradient defaults to central differences."""

    func: Callable
    grad: Optional[Callable] = None
    curve_scale: float = 1.0

    @property
    def scale(self):
        return self.curve_scale

    def indicator(self, x, y):
        return self.func(x, y)

    def gradient(self, x, y):
        if self.grad is not None:
            return self.grad(x, y)
        h = 1e-6 * self.curve_scale
        gx = (self.func(x + h, y) - self.func(x - h, y)) / (2 * h)
        gy = (self.func(x, y + h) - self.func(x, y - h)) / (2 * h)
        return float(gx), float(gy)


@dataclass(frozen=True)
class Parametric(InterfaceCurve):
    """Closed trigonometric curve.

    ``xcoef`` and ``ycoef`` are tuples of ``(k, a_k, b_k)`` giving
    ``sum a_k cos(k t) + b_k sin(k t)``; ``k = 0`` carries the offset.
    Classification uses ray-casting parity against the exact roots of the
    parametrisation, so node sides and crossing positions agree exactly.
    """

    xcoef: tuple
    ycoef: tuple
    samples: int = 2048
    _orient: float = field(default=0.0, init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.linspace(0.0, TWO_PI, self.samples, endpoint=False)
        x, y = self.evaluate(t)
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        object.__setattr__(self, "_orient", 1.0 if area > 0 else -1.0)

    @property
    def scale(self):
        t = np.linspace(0.0, TWO_PI, 256, endpoint=False)
        x, y = self.evaluate(t)
        return float(max(np.ptp(x), np.ptp(y)))

    @staticmethod
    def _series(coef, t, deriv=0):
        out = np.zeros_like(np.asarray(t, dtype=float))
        for k, a, b in coef:
            if deriv == 0:
                out = out + a * np.cos(k * t) + b * np.sin(k * t)
            elif deriv == 1:
                out = out - a * k * np.sin(k * t) + b * k * np.cos(k * t)
            else:
                out = out - a * k * k * np.cos(k * t) - b * k * k * np.sin(k * t)
        return out

    def evaluate(self, t, deriv=0):
        return self._series(self.xcoef, t, deriv), self._series(self.ycoef, t, deriv)

    @functools.lru_cache(maxsize=4096)
    def line_roots(self, axis: str, c: float):
        """Exact crossings of the mesh line ``y = c`` (axis 'x') or ``x = c`` (axis 'y').

        Returns a sorted tuple of ``(coordinate_along_line, t)``.
        """
        coef_fix, coef_free = (self.ycoef, self.xcoef) if axis == "x" else (self.xcoef, self.ycoef)
        t = np.linspace(0.0, TWO_PI, self.samples + 1)
        g = self._series(coef_fix, t) - c
        out = []
        for k in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) <= 0)[0]:
            if g[k] == 0.0 and k > 0:
                continue  # root already counted at the end of the previous interval
            if g[k] == 0.0:
                r = t[k]
            elif g[k + 1] == 0.0:
                r = t[k + 1]
            else:
                r = brentq(lambda s: float(self._series(coef_fix, s) - c),
                           t[k], t[k + 1], xtol=1e-15, maxiter=MAX_BISECT)
            if r >= TWO_PI:
                continue
            out.append((float(self._series(coef_free, r)), float(r)))
        out.sort()
        return tuple(out)

    def classify_grid(self, xs, ys):
        sides = np.empty((len(ys), len(xs)), dtype=np.int8)
        xs = np.asarray(xs, dtype=float)
        for j, yj in enumerate(ys):
            roots = np.array([r[0] for r in self.line_roots("x", float(yj))])
            if roots.size == 0:
                sides[j] = PLUS
                continue
            right = len(roots) - np.searchsorted(roots, xs, side="right")
            inside = (right % 2) == 1
            near = np.min(np.abs(xs[:, None] - roots[None, :]), axis=1) <= SNAP_TOL * self.scale
            sides[j] = np.where(inside | near, MINUS, PLUS)
        return sides

    def near_mask(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros((len(ys), len(xs)), dtype=bool)
        for j, yj in enumerate(ys):
            roots = np.array([r[0] for r in self.line_roots("x", float(yj))])
            if roots.size:
                out[j] = np.min(np.abs(xs[:, None] - roots[None, :]), axis=1) <= SNAP_TOL * self.scale
        return out

    def indicator(self, x, y):
        """Signed distance to the sampled polyline; the sign is exact."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        shape = np.broadcast(x, y).shape
        x, y = np.broadcast_to(x, shape).ravel(), np.broadcast_to(y, shape).ravel()
        t = np.linspace(0.0, TWO_PI, self.samples, endpoint=False)
        px, py = self.evaluate(t)
        d = np.sqrt(np.min((x[:, None] - px[None, :]) ** 2 + (y[:, None] - py[None, :]) ** 2, axis=1))
        s = np.array([self.side(xi, yi) for xi, yi in zip(x, y)], dtype=float)
        return (s * d).reshape(shape)

    def side(self, x, y):
        return int(self.classify_grid(np.array([x]), np.array([y]))[0, 0])

    def normal_at(self, t):
        dx, dy = self.evaluate(t, 1)
        g = math.hypot(float(dx), float(dy))
        if g < 1e-12:
            raise DegenerateNormal(f"stationary parametrisation at t={t}")
        # counter-clockwise curves have the outward normal on the right of the tangent
        return self._orient * float(dy) / g, -self._orient * float(dx) / g

    def nearest_parameter(self, x, y):
        t = np.linspace(0.0, TWO_PI, self.samples, endpoint=False)
        px, py = self.evaluate(t)
        k = int(np.argmin((px - x) ** 2 + (py - y) ** 2))
        s = float(t[k])
        for _ in range(30):
            cx, cy = self.evaluate(s)
            dx, dy = self.evaluate(s, 1)
            ddx, ddy = self.evaluate(s, 2)
            f = (cx - x) * dx + (cy - y) * dy
            fp = dx * dx + dy * dy + (cx - x) * ddx + (cy - y) * ddy
            step = float(f / fp)
            s -= step
            if abs(step) < 1e-15:
                break
        return s % TWO_PI

    def gradient(self, x, y):
        return self.normal_at(self.nearest_parameter(x, y))

    def locate(self, p0, p1, s0, s1):
        horizontal = p0[1] == p1[1]
        axis, c = ("x", p0[1]) if horizontal else ("y", p0[0])
        lo, hi = (p0[0], p1[0]) if horizontal else (p0[1], p1[1])
        tol = SNAP_TOL * self.scale
        roots = [r for r in self.line_roots(axis, float(c)) if lo - tol <= r[0] <= hi + tol]
        if not roots:
            raise NoBracket(f"no parametric root between {p0} and {p1}")
        pos = roots[len(roots) // 2][0]
        pos = min(max(pos, lo), hi)
        return (pos, c) if horizontal else (c, pos)


class Complement(InterfaceCurve):
    """The same curve with plus and minus sides exchanged."""

    def __init__(self, inner: InterfaceCurve):
        self.inner = inner
        if hasattr(inner, "line_roots"):
            self.line_roots = inner.line_roots
            self.normal_at = lambda t: tuple(-v for v in inner.normal_at(t))
            self.nearest_parameter = inner.nearest_parameter

    def __repr__(self):
        return f"Complement({self.inner!r})"

    def __eq__(self, other):
        return isinstance(other, Complement) and other.inner == self.inner

    def __hash__(self):
        return hash(("complement", self.inner))

    @property
    def scale(self):
        return self.inner.scale

    def indicator(self, x, y):
        return -self.inner.indicator(x, y)

    def gradient(self, x, y):
        gx, gy = self.inner.gradient(x, y)
        return -gx, -gy

    def near_mask(self, xs, ys):
        return self.inner.near_mask(xs, ys)

    def classify_grid(self, xs, ys):
        flipped = -self.inner.classify_grid(xs, ys)
        return np.where(self.near_mask(xs, ys), MINUS, flipped).astype(np.int8)

    def locate(self, p0, p1, s0, s1):
        return self.inner.locate(p0, p1, -s0, -s1)


def complement(curve: InterfaceCurve) -> Complement:
    return Complement(curve)


def circle(r0: float) -> Circle:
    return Circle(r0)


def ellipse(a: float, b: float, r: float) -> Ellipse:
    return Ellipse(a, b, r)


def flower(base: float, amp: float, lobes: int) -> Flower:
    return Flower(base, amp, lobes)


def jigsaw() -> Parametric:
    """The jigsaw-like benchmark curve centred at (0, 1.5)."""
    return Parametric(
        xcoef=((1, 0.6, 0.0), (3, -0.3, 0.0)),
        ycoef=((0, 1.5, 0.0), (1, 0.0, 0.7), (3, 0.0, -0.07), (7, 0.0, 0.2)),
    )


def classify_point(curve: InterfaceCurve, p, tol: float = SNAP_TOL) -> int:
    """Return PLUS, MINUS or ON_INTERFACE for a single point."""
    x, y = p
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("point must be finite")
    if hasattr(curve, "line_roots"):
        roots = [r[0] for r in curve.line_roots("x", float(y))]
        if any(abs(x - r) <= tol * curve.scale for r in roots):
            return ON_INTERFACE
        return curve.side(x, y)
    f = float(curve.indicator(x, y))
    if abs(f) <= tol * curve.scale:
        return ON_INTERFACE
    return PLUS if f > 0 else MINUS


@dataclass(frozen=True)
class CrossingPoint:
    """Intersection of the interface with one grid cell edge.

    ``axis`` is 'x' for a horizontal mesh line (line index ``j``, segment
    between nodes ``i`` and ``i+1``) and 'y' for a vertical one (line
    index ``i``, segment between ``j`` and ``j+1``).
    """

    x: float
    y: float
    axis: str
    line: int
    segment: int
    theta: float
    normal: tuple
    tangent: tuple

    @property
    def position(self):
        return (self.x, self.y)

    def nodes(self):
        """Grid indices ``(i, j)`` of the two straddling nodes, low then high."""
        if self.axis == "x":
            return (self.segment, self.line), (self.segment + 1, self.line)
        return (self.line, self.segment), (self.line, self.segment + 1)


def _frame(n1, n2):
    theta = math.atan2(n2, n1) % TWO_PI
    return theta, (n1, n2), (-n2, n1)


def normal_angle(curve: InterfaceCurve, s) -> float:
    """Angle of the outward normal at a crossing (or any on-curve point)."""
    x, y = s.position if isinstance(s, CrossingPoint) else s
    n1, n2 = curve.normal(x, y)
    return math.atan2(n2, n1) % TWO_PI


def _crossing(curve, p, axis, line, seg):
    if hasattr(curve, "line_roots"):
        along, c = (p[0], p[1]) if axis == "x" else (p[1], p[0])
        cand = curve.line_roots(axis, float(c))
        k = min(range(len(cand)), key=lambda m: abs(cand[m][0] - along))
        n1, n2 = curve.normal_at(cand[k][1])
    else:
        n1, n2 = curve.normal(*p)
    theta, n, tau = _frame(n1, n2)
    return CrossingPoint(p[0], p[1], axis, line, seg, theta, n, tau)


def _multi_cross_cells(curve, xs, ys, sub=8):
    """Cells (axis, line, segment) that the interface crosses more than once."""
    out = []
    for axis, lines, along in (("x", ys, xs), ("y", xs, ys)):
        for k, c in enumerate(lines):
            if hasattr(curve, "line_roots"):
                roots = np.array([r[0] for r in curve.line_roots(axis, float(c))])
                if roots.size < 2:
                    continue
                counts = np.histogram(roots, bins=along)[0]
            else:
                t = np.linspace(along[0], along[-1], sub * (len(along) - 1) + 1)
                f = curve.indicator(t, c) if axis == "x" else curve.indicator(c, t)
                s = np.where(f > SNAP_TOL * curve.scale, 1, -1)
                changes = (s[1:] != s[:-1]).reshape(len(along) - 1, sub)
                counts = changes.sum(axis=1)
            for seg in np.nonzero(counts > 1)[0]:
                out.append((axis, k, int(seg)))
    return out


def find_crossings(curve: InterfaceCurve, grid, sides=None, on_multi: str = "warn"):
    """All crossings of the interface with grid edges joining opposite sides.

    ``grid`` needs ``x`` and ``y`` node coordinate arrays.  Cells whose
    endpoints disagree yield exactly one crossing.  Cells in which the
    interface passes more than once are reported through ``MultiCross``
    (raised when ``on_multi == 'raise'``, logged otherwise); such a cell
    contributes a single crossing if its endpoints disagree and none if
    they agree, because the grid cannot see the feature.
    """
    xs, ys = np.asarray(grid.x), np.asarray(grid.y)
    if sides is None:
        sides = curve.classify_grid(xs, ys)
    out = []
    ny, nx = sides.shape
    for j in range(ny):
        row = sides[j]
        for i in np.nonzero(row[:-1] != row[1:])[0]:
            p = curve.locate((xs[i], ys[j]), (xs[i + 1], ys[j]), row[i], row[i + 1])
            out.append(_crossing(curve, p, "x", j, int(i)))
    for i in range(nx):
        col = sides[:, i]
        for j in np.nonzero(col[:-1] != col[1:])[0]:
            p = curve.locate((xs[i], ys[j]), (xs[i], ys[j + 1]), col[j], col[j + 1])
            out.append(_crossing(curve, p, "y", i, int(j)))
    multi = _multi_cross_cells(curve, xs, ys)
    if multi:
        msg = f"{len(multi)} cell(s) crossed more than once: {multi[:4]}"
        if on_multi == "raise":
            raise MultiCross(msg)
        log.warning(msg)
    return out
