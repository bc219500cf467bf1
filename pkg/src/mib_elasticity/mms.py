"""Manufactured-solution benchmark cases.

Each case supplies piecewise closed-form displacements written with jets, so
first and second partials are exact.  Body forces, jump data and Dirichlet
values are all derived from those closed forms.

In every benchmark the plus branch (and plus material) lives inside the
interface curve, so the case curves are complements of the basic shapes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import geometry
from .geometry import MINUS, PLUS, CrossingPoint, InterfaceCurve
from .jets import Jet, cos, exp, log, sin
from .material import ElasticField, constant_field, eval_field, variable_field

R0_EX2 = 0.5
C0_EX2 = -0.1
ELLIPSE_R = 0.35


class Exact(NamedTuple):
    u1: Jet
    u2: Jet


class JumpData(NamedTuple):
    """Interface data at one crossing.

    ``b`` is the displacement jump, ``T = (phi, psi)`` the traction jump and
    ``db_dtau`` the tangential derivative of ``b`` (zero for weak cases).
    """

    b: tuple
    T: tuple
    db_dtau: tuple


@dataclass(frozen=True)
class CaseDefinition:
    id: str
    domain: tuple
    curve: Optional[InterfaceCurve]
    field: ElasticField
    exact_plus: Callable
    exact_minus: Callable
    discontinuity: str
    grids: tuple = ()
    description: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def exact(self, side):
        return self.exact_plus if side == PLUS else self.exact_minus


# --- exact displacement families -------------------------------------------

def ex1_plus(X, Y):
    u1 = X * Y + sin(1 + X * X + Y * Y) - 3 * X * X + Y * Y
    u2 = cos(1 + X * X - Y * Y) + 5 * X * X * Y + X * X - Y * Y + 2
    return Exact(u1, u2)


def ex1_minus(X, Y):
    u1 = X * Y + sin(1 + X * X + Y * Y) - 2 * X * X + 5 * Y * Y - ELLIPSE_R ** 2
    u2 = cos(1 + X * X - Y * Y) + 5 * X * X * Y + 3 * X * X + 7 * Y * Y + 2 * (1 - ELLIPSE_R ** 2)
    return Exact(u1, u2)


def _r2(X, Y):
    return X * X + Y * Y


def ex2_plus(X, Y):
    u1 = -_r2(X, Y)
    u2 = log(1 + X * X + 3 * Y * Y) + sin(X * Y)
    return Exact(u1, u2)


def ex2_minus(X, Y):
    r2 = _r2(X, Y)
    if np.any(np.asarray(r2.v) < 1e-28):
        raise ValueError("Example 2 minus branch is singular at the origin")
    r0 = R0_EX2
    const = -r0 ** 2 + (r0 ** 4 + C0_EX2 * math.log(2 * r0)) / 10
    # log(2r) = 0.5 log(4 r^2)
    u1 = -(r2 * r2 + C0_EX2 * 0.5 * log(4 * r2)) / 10 + const
    u2 = log(1 + X * X + 3 * Y * Y) + sin(X * Y) - 4 * r2 + 4 * r0 ** 2
    return Exact(u1, u2)


def ex3_plus(X, Y):
    r2 = _r2(X, Y)
    g = exp(-(3.5 ** 2) * r2 ** 5)
    return Exact(g, g + X * Y)


def ex3_minus(X, Y):
    r2 = _r2(X, Y)
    q = 7 * r2 ** 3 - 5 * X ** 4 * Y + 10 * X * X * Y ** 3 - Y ** 5
    g = exp(-(q * q))
    return Exact(g, g + X * Y)


def zero_solution(X, Y):
    z = Jet(0.0 * X.v)
    return Exact(z, z)


def quadratic_solution(X, Y):
    u1 = X * X + X * Y - Y * Y + X + 1
    u2 = 2 * Y * Y - X * X + 3 * X * Y - Y
    return Exact(u1, u2)


def smooth_solution(X, Y):
    u1 = sin(X + 2 * Y) + X * X * Y
    u2 = cos(X - Y) + X * Y * Y
    return Exact(u1, u2)


# --- material sets ----------------------------------------------------------

MATERIALS = {
    "1a": (1.5e6, 0.20, 2.0e6, 0.24),
    "1b": (1.5e6, 0.00024, 2.0e6, 0.24),
    "1c": (2.0e3, 0.20, 2.0e6, 0.24),
    "2a": (2.5e6, 0.20, 3.0e6, 0.24),
    "2b": (2.5e6, 0.00024, 3.0e6, 0.24),
    "2c": (3.0e3, 0.20, 3.0e6, 0.24),
    "3a": (1.5e6, 0.20, 2.0e6, 0.24),
    "3b": (1.5e6, 0.00024, 2.0e6, 0.24),
}

VAR_EX6 = dict(mu_plus=(1.5e6, 2.0e6), lam_plus=(1.0e6, 4.0e6 / 3.0),
               mu_minus=(2.0e6, 1.5e6), lam_minus=(2.0e6, 1.5e6))
VAR_EX78 = dict(mu_plus=(2.5e6, 3.0e6), lam_plus=(5.0e6, 2.0e6),
                mu_minus=(3.0e6, 2.5e6), lam_minus=(3.0e6, 2.5e6))

UNIT = (-1.0, 1.0, -1.0, 1.0)
HALF = (-0.5, 0.5, -0.5, 0.5)
SQUARE_GRIDS = (20, 40, 80, 160, 320)


def _ellipse():
    return geometry.complement(geometry.ellipse(1.0, 4.0, ELLIPSE_R))


def _circle():
    return geometry.complement(geometry.circle(R0_EX2))


def _flower():
    return geometry.complement(geometry.flower(0.5, 1.0 / 7.0, 5))


def _square(ns):
    return tuple((n, n) for n in ns)


def _build(case_id):
    if case_id in ("1a", "1b", "1c"):
        return CaseDefinition(case_id, HALF, _ellipse(), constant_field(*MATERIALS[case_id]),
                              ex1_plus, ex1_minus, "weak", _square(SQUARE_GRIDS),
                              "ellipse, piecewise constant media")
    if case_id in ("2a", "2b", "2c"):
        return CaseDefinition(case_id, UNIT, _circle(), constant_field(*MATERIALS[case_id]),
                              ex2_plus, ex2_minus, "weak", _square(SQUARE_GRIDS),
                              "circle, piecewise constant media")
    if case_id in ("3a", "3b"):
        return CaseDefinition(case_id, UNIT, _flower(), constant_field(*MATERIALS[case_id]),
                              ex3_plus, ex3_minus, "weak", _square(SQUARE_GRIDS),
                              "flower, piecewise constant media")
    if case_id == "4":
        return CaseDefinition("4", UNIT, _flower(), constant_field(*MATERIALS["1a"]),
                              ex1_plus, ex1_minus, "strong", _square(SQUARE_GRIDS),
                              "flower, strong discontinuity")
    if case_id == "5":
        return CaseDefinition("5", (-1.0, 1.0, 0.0, 3.0), geometry.complement(geometry.jigsaw()),
                              constant_field(*MATERIALS["1a"]), ex1_plus, ex1_minus, "strong",
                              ((40, 30), (80, 60), (160, 120), (320, 240)),
                              "jigsaw, strong discontinuity")
    if case_id == "6":
        return CaseDefinition("6", HALF, _ellipse(), variable_field(**VAR_EX6),
                              ex1_plus, ex1_minus, "weak", _square(SQUARE_GRIDS),
                              "ellipse, variable media")
    if case_id == "7":
        return CaseDefinition("7", UNIT, _circle(), variable_field(**VAR_EX78),
                              ex2_plus, ex2_minus, "weak", _square(SQUARE_GRIDS),
                              "circle, variable media")
    if case_id == "8":
        return CaseDefinition("8", UNIT, _flower(), variable_field(**VAR_EX78),
                              ex1_plus, ex1_minus, "strong", _square((40, 80, 160, 320)),
                              "flower, variable media, strong discontinuity")
    if case_id == "zero":
        return CaseDefinition("zero", UNIT, _circle(), constant_field(*MATERIALS["1a"]),
                              zero_solution, zero_solution, "weak", _square((20, 40)),
                              "u = 0 self-test")
    if case_id == "quadratic":
        return CaseDefinition("quadratic", UNIT, None, constant_field(*MATERIALS["1a"]),
                              quadratic_solution, quadratic_solution, "weak",
                              _square((20, 40, 80)), "quadratic field, no interface")
    if case_id == "smooth":
        m = MATERIALS["1a"][:2]
        return CaseDefinition("smooth", UNIT, _circle(), constant_field(*m, *m),
                              smooth_solution, smooth_solution, "weak",
                              _square((20, 40, 80, 160)), "matched media, smooth field")
    raise KeyError(f"unknown case id {case_id!r}")


CASE_IDS = ("1a", "1b", "1c", "2a", "2b", "2c", "3a", "3b", "4", "5", "6", "7", "8")
FIXTURE_IDS = ("zero", "quadratic", "smooth")


def get_case(case_id: str, materials: Optional[dict] = None) -> CaseDefinition:
    """Look up a case; ``materials`` may override constant media.

    Recognised override keys: ``mu_plus``, ``nu_plus``, ``mu_minus``, ``nu_minus``.
    """
    case = _build(str(case_id))
    if materials:
        if not case.field.homogeneous:
            raise ValueError("material overrides apply to constant media only")
        p, m = case.field.plus, case.field.minus
        mu_p = materials.get("mu_plus", float(p.mu(Jet(0.0), Jet(0.0)).v))
        mu_m = materials.get("mu_minus", float(m.mu(Jet(0.0), Jet(0.0)).v))
        fld = constant_field(mu_p, materials.get("nu_plus", p.nu),
                             mu_m, materials.get("nu_minus", m.nu))
        case = replace(case, field=fld)
    return case


def with_curve(case: CaseDefinition, curve) -> CaseDefinition:
    return replace(case, curve=curve)


# --- evaluators ----------------------------------------------------------------

def eval_exact(case: CaseDefinition, side: int, p) -> Exact:
    x, y = p
    X, Y = Jet.coords(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return case.exact(side)(X, Y)


def divergence_of_stress(mat, ex: Exact):
    """``div T`` for the isotropic law with position-dependent Lamé fields."""
    u1, u2 = ex.u1, ex.u2
    lam, mu = mat.lam, mat.mu
    d1 = ((lam + 2 * mu) * u1.xx + mu * u1.yy + (lam + mu) * u2.xy
          + (mat.lam_x + 2 * mat.mu_x) * u1.x + mat.lam_x * u2.y
          + mat.mu_y * u1.y + mat.mu_y * u2.x)
    d2 = (mu * u2.xx + (lam + 2 * mu) * u2.yy + (lam + mu) * u1.xy
          + mat.mu_x * u1.y + mat.mu_x * u2.x
          + (mat.lam_y + 2 * mat.mu_y) * u2.y + mat.lam_y * u1.x)
    return d1, d2


def eval_force(case: CaseDefinition, side: int, p):
    """Body force ``F = -div T`` of the exact solution on ``side``."""
    mat = eval_field(case.field, side, p)
    d1, d2 = divergence_of_stress(mat, eval_exact(case, side, p))
    return -d1, -d2


def traction(mat, ex: Exact, n):
    """Traction ``T . n`` written with the P-wave modulus, per component."""
    n1, n2 = n
    u1, u2 = ex.u1, ex.u2
    t1 = (mat.M * u1.x + mat.lam * u2.y) * n1 + mat.mu * (u1.y + u2.x) * n2
    t2 = mat.mu * (u1.y + u2.x) * n1 + (mat.lam * u1.x + mat.M * u2.y) * n2
    return t1, t2


def eval_jumps(case: CaseDefinition, s) -> JumpData:
    """Jump data ``[u]``, ``[T.n]`` and ``d[u]/dtau`` at a crossing (plus minus minus)."""
    if isinstance(s, CrossingPoint):
        p, n, tau = s.position, s.normal, s.tangent
    else:
        p, n = s
        tau = (-n[1], n[0])
    ep, em = eval_exact(case, PLUS, p), eval_exact(case, MINUS, p)
    mp, mm = eval_field(case.field, PLUS, p), eval_field(case.field, MINUS, p)
    tp, tm = traction(mp, ep, n), traction(mm, em, n)
    b = (float(ep.u1.v - em.u1.v), float(ep.u2.v - em.u2.v))
    T = (float(tp[0] - tm[0]), float(tp[1] - tm[1]))
    db = (float((ep.u1.x - em.u1.x) * tau[0] + (ep.u1.y - em.u1.y) * tau[1]),
          float((ep.u2.x - em.u2.x) * tau[0] + (ep.u2.y - em.u2.y) * tau[1]))
    return JumpData(b, T, db)


def eval_boundary(case: CaseDefinition, p):
    """Dirichlet data: the exact solution on whichever side contains ``p``."""
    side = PLUS if case.curve is None else case.curve.side(*p)
    ex = eval_exact(case, side, p)
    return float(ex.u1.v), float(ex.u2.v)


__all__ = ["CaseDefinition", "JumpData", "Exact", "get_case", "eval_exact", "eval_force",
           "eval_jumps", "eval_boundary", "traction", "divergence_of_stress", "CASE_IDS",
           "FIXTURE_IDS", "with_curve"]
