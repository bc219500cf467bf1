"""Piecewise elastic parameters and their gradients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import Incompressible
from .geometry import MINUS, PLUS
from .jets import Jet


def p_wave_modulus(mu, nu):
    """``M = 2 mu (1 - nu) / (1 - 2 nu)``."""
    if np.any(np.abs(1.0 - 2.0 * np.asarray(nu)) < 1e-12):
        raise Incompressible(f"nu = {nu} is incompressible")
    return 2.0 * mu * (1.0 - nu) / (1.0 - 2.0 * nu)


def lame_from_young(E, nu):
    """Return ``(mu, lambda)`` for Young's modulus and Poisson's ratio."""
    return E / (2.0 * (1.0 + nu)), E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))


def lambda_from_mu_nu(mu, nu):
    return 2.0 * mu * nu / (1.0 - 2.0 * nu)


class MaterialPoint(NamedTuple):
    mu: np.ndarray
    lam: np.ndarray
    nu: np.ndarray
    M: np.ndarray
    mu_x: np.ndarray
    mu_y: np.ndarray
    lam_x: np.ndarray
    lam_y: np.ndarray


@dataclass(frozen=True)
class SideMaterial:
    """Lamé fields on one side.

    ``mu`` and ``lam`` map coordinate jets ``(X, Y)`` to jets, which gives
    their gradients analytically.  ``nu`` is set for constant media given by
    shear modulus and Poisson's ratio.
    """

    mu: Callable
    lam: Callable
    nu: Optional[float] = None

    @classmethod
    def constant(cls, mu: float, nu: float) -> "SideMaterial":
        if not 0.0 < nu < 0.5:
            raise ValueError(f"Poisson's ratio {nu} outside (0, 0.5)")
        if mu <= 0:
            raise ValueError("shear modulus must be positive")
        lam = lambda_from_mu_nu(mu, nu)
        return cls(lambda X, Y: Jet(mu), lambda X, Y: Jet(lam), nu)

    @property
    def is_constant(self):
        return self.nu is not None


@dataclass(frozen=True)
class ElasticField:
    plus: SideMaterial
    minus: SideMaterial

    @property
    def homogeneous(self):
        return self.plus.is_constant and self.minus.is_constant

    def side(self, s):
        return self.plus if s == PLUS else self.minus


def eval_field(field: ElasticField, side: int, p) -> MaterialPoint:
    """Material values and gradients on ``side`` at point(s) ``p = (x, y)``."""
    x, y = p
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X, Y = Jet.coords(x, y)
    m = field.side(side)
    mu = m.mu(X, Y)
    lam = m.lam(X, Y)
    zero = np.zeros_like(x)
    mu_v, lam_v = mu.v + zero, lam.v + zero
    if m.nu is not None:
        nu = m.nu + zero
        M = p_wave_modulus(mu_v, nu)
    else:
        nu = lam_v / (2.0 * (lam_v + mu_v))
        M = lam_v + 2.0 * mu_v
    return MaterialPoint(mu_v, lam_v, nu, M, mu.x + zero, mu.y + zero, lam.x + zero, lam.y + zero)


def constant_field(mu_plus, nu_plus, mu_minus, nu_minus) -> ElasticField:
    return ElasticField(SideMaterial.constant(mu_plus, nu_plus),
                        SideMaterial.constant(mu_minus, nu_minus))


def _affine_sum(c0, c1):
    # c0 + c1 (x + y)
    return lambda X, Y: c1 * (X + Y) + c0


def _bilinear(c0, c1):
    # c0 + c1 x y
    return lambda X, Y: c1 * (X * Y) + c0


def variable_field(mu_plus, lam_plus, mu_minus, lam_minus) -> ElasticField:
    """Fields of the form ``c0 + c1 (x + y)`` outside and ``c0 + c1 x y`` inside.

    Each argument is the coefficient pair ``(c0, c1)``.
    """
    return ElasticField(
        SideMaterial(_affine_sum(*mu_plus), _affine_sum(*lam_plus)),
        SideMaterial(_bilinear(*mu_minus), _bilinear(*lam_minus)),
    )


__all__ = ["p_wave_modulus", "lame_from_young", "lambda_from_mu_nu", "MaterialPoint",
           "SideMaterial", "ElasticField", "eval_field", "constant_field", "variable_field",
           "PLUS", "MINUS"]
