"""Right-preconditioned BiCGStab for the assembled system."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import Breakdown, Unconverged

log = logging.getLogger(__name__)

PRECONDITIONERS = ("none", "jacobi", "ilu", "lu")


@dataclass(frozen=True)
class SolverConfig:
    method: str = "bicgstab"
    rel_tol: float = 1e-10
    max_iter: Optional[int] = None
    precond: str = "none"
    ilu_drop_tol: float = 1e-5
    ilu_fill: float = 20.0

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.method != "bicgstab":
            raise ValueError(f"unknown method {self.method!r}")
        if self.precond not in PRECONDITIONERS:
            raise ValueError(f"unknown preconditioner {self.precond!r}")


@dataclass
class SolveStats:
    iterations: int
    residual: float
    converged: bool
    restarts: int


def _preconditioner(A, cfg: SolverConfig):
    if cfg.precond == "none":
        return lambda v: v
    if cfg.precond == "jacobi":
        d = A.diagonal()
        if np.any(d == 0):
            raise ValueError("zero diagonal entry; Jacobi scaling unavailable")
        inv = 1.0 / d
        return lambda v: inv * v
    if cfg.precond == "lu":
        # complete factorization; the Krylov loop then only polishes the result
        return spla.splu(sp.csc_matrix(A)).solve
    ilu = spla.spilu(sp.csc_matrix(A), drop_tol=cfg.ilu_drop_tol, fill_factor=cfg.ilu_fill)
    return ilu.solve


def _bicgstab(A, b, x, apply_m, tol_abs, max_iter, tiny=1e-300):
    """Plain iteration; returns ``(x, iterations, status)``."""
    r = b - A @ x
    rhat = r.copy()
    rho = alpha = omega = 1.0
    v = np.zeros_like(b)
    p = np.zeros_like(b)
    for it in range(1, max_iter + 1):
        rho_new = float(rhat @ r)
        if abs(rho_new) <= 1e-30 * float(np.linalg.norm(rhat) * np.linalg.norm(r)) + tiny:
            return x, it - 1, "breakdown"
        beta = (rho_new / rho) * (alpha / omega)
        p = r + beta * (p - omega * v)
        ph = apply_m(p)
        v = A @ ph
        denom = float(rhat @ v)
        if denom == 0.0:
            return x, it - 1, "breakdown"
        alpha = rho_new / denom
        s = r - alpha * v
        if np.linalg.norm(s) <= tol_abs:
            x = x + alpha * ph
            return x, it, "converged"
        sh = apply_m(s)
        t = A @ sh
        tt = float(t @ t)
        if tt == 0.0:
            return x + alpha * ph, it, "breakdown"
        omega = float(t @ s) / tt
        x = x + alpha * ph + omega * sh
        r = s - omega * t
        rho = rho_new
        if np.linalg.norm(r) <= tol_abs:
            return x, it, "converged"
        if omega == 0.0:
            return x, it, "breakdown"
    return x, max_iter, "maxiter"


def solve(system, cfg: SolverConfig = SolverConfig()):
    """Solve from a zero initial guess; returns ``(x, SolveStats)``.

    A breakdown restarts once from the current iterate.  Recursive residual
    drift is corrected by restarting while iterations remain.
    """
    A = system.A if hasattr(system, "A") else system
    b = system.rhs if hasattr(system, "rhs") else None
    return solve_linear(A, b, cfg)


def solve_linear(A, b, cfg: SolverConfig = SolverConfig()):
    A = sp.csr_matrix(A)
    b = np.asarray(b, dtype=float)
    n = b.size
    max_iter = cfg.max_iter if cfg.max_iter is not None else 20 * n
    bnorm = float(np.linalg.norm(b))
    x = np.zeros(n)
    if bnorm == 0.0:
        return x, SolveStats(0, 0.0, True, 0)
    apply_m = _preconditioner(A, cfg)
    tol_abs = cfg.rel_tol * bnorm
    total, restarts, breakdowns = 0, 0, 0
    while True:
        x, it, status = _bicgstab(A, b, x, apply_m, tol_abs, max_iter - total)
        total += it
        res = float(np.linalg.norm(b - A @ x)) / bnorm
        if res <= cfg.rel_tol:
            return x, SolveStats(total, res, True, restarts)
        if status == "breakdown":
            breakdowns += 1
            if breakdowns > 1:
                raise Breakdown(f"BiCGStab broke down twice (residual {res:.3e})")
        if total >= max_iter or (status == "converged" and restarts > 20):
            raise Unconverged(f"relative residual {res:.3e} after {total} iterations",
                              x=x, stats=SolveStats(total, res, False, restarts))
        restarts += 1
        log.info("restarting BiCGStab at iteration %d (%s, residual %.3e)", total, status, res)
