"""Second-order 2D jets.

A :class:`Jet` carries a value together with its first and second partial
derivatives in ``x`` and ``y``.  Arithmetic and the elementary functions
below apply the chain rule by hand, so a closed-form field written with jets
yields exact analytic partials.  Components may be floats or numpy arrays.
"""
from __future__ import annotations

import numpy as np


class Jet:
    __slots__ = ("v", "x", "y", "xx", "xy", "yy")

    def __init__(self, v, x=0.0, y=0.0, xx=0.0, xy=0.0, yy=0.0):
        self.v = v
        self.x = x
        self.y = y
        self.xx = xx
        self.xy = xy
        self.yy = yy

    @classmethod
    def coords(cls, x, y):
        """Return the coordinate jets ``X`` and ``Y``."""
        one = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
        zero = 0.0 * one
        return (cls(x, one, zero, zero, zero, zero),
                cls(y, zero, one, zero, zero, zero))

    @classmethod
    def const(cls, c):
        return cls(c)

    def tuple(self):
        return (self.v, self.x, self.y, self.xx, self.xy, self.yy)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.x + other.x, self.y + other.y,
                       self.xx + other.xx, self.xy + other.xy, self.yy + other.yy)
        return Jet(self.v + other, self.x, self.y, self.xx, self.xy, self.yy)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.x, -self.y, -self.xx, -self.xy, -self.yy)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self, other
            return Jet(
                a.v * b.v,
                a.x * b.v + a.v * b.x,
                a.y * b.v + a.v * b.y,
                a.xx * b.v + 2 * a.x * b.x + a.v * b.xx,
                a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy,
                a.yy * b.v + 2 * a.y * b.y + a.v * b.yy,
            )
        return Jet(self.v * other, self.x * other, self.y * other,
                   self.xx * other, self.xy * other, self.yy * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n == 0:
            return Jet(self.v * 0 + 1.0)
        f = self.v ** n
        d1 = n * self.v ** (n - 1)
        d2 = n * (n - 1) * self.v ** (n - 2) if n >= 2 else 0.0 * self.v
        return self._apply(f, d1, d2)

    def reciprocal(self):
        inv = 1.0 / self.v
        return self._apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def _apply(self, f, d1, d2):
        """Compose a scalar function with value f, derivative d1, second derivative d2."""
        return Jet(
            f,
            d1 * self.x,
            d1 * self.y,
            d1 * self.xx + d2 * self.x * self.x,
            d1 * self.xy + d2 * self.x * self.y,
            d1 * self.yy + d2 * self.y * self.y,
        )


def sin(u: Jet) -> Jet:
    s, c = np.sin(u.v), np.cos(u.v)
    return u._apply(s, c, -s)


def cos(u: Jet) -> Jet:
    s, c = np.sin(u.v), np.cos(u.v)
    return u._apply(c, -s, -c)


def exp(u: Jet) -> Jet:
    e = np.exp(u.v)
    return u._apply(e, e, e)


def log(u: Jet) -> Jet:
    inv = 1.0 / u.v
    return u._apply(np.log(u.v), inv, -inv * inv)
