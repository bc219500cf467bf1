"""Benchmark runner: error norms, convergence orders and CSV tables."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import mms
from .assembly import assemble, dump_matrix, exact_vector
from .errors import GeometryError, MIBError
from .geometry import find_crossings
from .grid import GridSpec, build_grid, classify_nodes
from .mib.table import RepTable, dump_reps
from .solver import SolverConfig, solve

log = logging.getLogger(__name__)

CSV_COLUMNS = ("case", "nx", "ny", "linf_u1", "ord_linf_u1", "l2_u1", "ord_l2_u1",
               "linf_u2", "ord_linf_u2", "l2_u2", "ord_l2_u2", "iters", "residual", "seconds")


def error_norms(numeric, exact, grid=None):
    """``(Linf, L2)`` with ``L2 = sqrt(sum(e^2) / (nx*ny))`` over all nodes."""
    e = np.asarray(numeric, dtype=float) - np.asarray(exact, dtype=float)
    if e.size == 0:
        return 0.0, 0.0
    n = grid.n_nodes if grid is not None else e.size
    return float(np.max(np.abs(e))), float(math.sqrt(np.sum(e * e) / n))


def compute_order(e_coarse: float, e_fine: float) -> float:
    return math.log2(e_coarse / e_fine)


class StageError(MIBError):
    """Pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage, err):
        super().__init__(f"{stage}: {err}")
        self.stage = stage
        self.cause = err


@dataclass
class LevelResult:
    nx: int
    ny: int
    linf_u1: float
    l2_u1: float
    linf_u2: float
    l2_u2: float
    iters: int
    residual: float
    seconds: float
    stats: dict = field(default_factory=dict)


@dataclass
class ConvergenceReport:
    case: str
    levels: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def orders(self, key):
        out = [None]
        for a, b in zip(self.levels, self.levels[1:]):
            ok = b.nx == 2 * a.nx and b.ny == 2 * a.ny
            ea, eb = getattr(a, key), getattr(b, key)
            out.append(compute_order(ea, eb) if ok and ea > 0 and eb > 0 else None)
        return out

    def rows(self):
        ords = {k: self.orders(k) for k in ("linf_u1", "l2_u1", "linf_u2", "l2_u2")}
        for n, lv in enumerate(self.levels):
            yield {
                "case": self.case, "nx": lv.nx, "ny": lv.ny,
                "linf_u1": lv.linf_u1, "ord_linf_u1": ords["linf_u1"][n],
                "l2_u1": lv.l2_u1, "ord_l2_u1": ords["l2_u1"][n],
                "linf_u2": lv.linf_u2, "ord_linf_u2": ords["linf_u2"][n],
                "l2_u2": lv.l2_u2, "ord_l2_u2": ords["l2_u2"][n],
                "iters": lv.iters, "residual": lv.residual, "seconds": lv.seconds,
            }

    def table(self):
        lines = [f"case {self.case}",
                 f"{'grid':>9} {'Linf(u1)':>10} {'ord':>5} {'L2(u1)':>10} {'ord':>5} "
                 f"{'Linf(u2)':>10} {'ord':>5} {'L2(u2)':>10} {'ord':>5} {'iters':>6} {'sec':>7}"]
        f = lambda v: "   --" if v is None else f"{v:5.2f}"
        for r in self.rows():
            lines.append(f"{r['nx']:>4}x{r['ny']:<4} {r['linf_u1']:10.3e} {f(r['ord_linf_u1'])} "
                         f"{r['l2_u1']:10.3e} {f(r['ord_l2_u1'])} {r['linf_u2']:10.3e} "
                         f"{f(r['ord_linf_u2'])} {r['l2_u2']:10.3e} {f(r['ord_l2_u2'])} "
                         f"{r['iters']:6d} {r['seconds']:7.2f}")
        return "\n".join(lines)


def write_csv(report: ConvergenceReport, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in report.rows():
            w.writerow({k: ("" if v is None else (f"{v:.6e}" if isinstance(v, float) else v))
                        for k, v in r.items()})


@dataclass
class Pipeline:
    """Intermediate products of one run, kept for diagnostics and tests."""

    case: object
    grid: object
    classification: object
    crossings: list
    table: object
    system: object = None


def build(case, nx, ny, on_multi="warn") -> Pipeline:
    """Geometry, classification, reps and assembly for ``case`` on an nx-by-ny grid."""
    a, b, c, d = case.domain
    try:
        grid = build_grid(GridSpec(a, b, c, d, nx, ny))
        cls = classify_nodes(grid, case.curve)
        crossings = [] if case.curve is None else find_crossings(case.curve, grid, cls.sides,
                                                                  on_multi=on_multi)
    except GeometryError as e:
        raise StageError("geometry", e) from e
    try:
        table = RepTable(grid, cls, crossings, case.field, lambda s: mms.eval_jumps(case, s),
                         case.curve)
    except MIBError as e:
        raise StageError("reps", e) from e
    pipe = Pipeline(case, grid, cls, crossings, table)
    try:
        pipe.system = assemble(grid, cls, table, case)
    except MIBError as e:
        raise StageError("assembly", e) from e
    return pipe


def run_case(case_id, nx, ny=None, cfg: Optional[SolverConfig] = None, materials=None,
             dump_matrix_path=None, dump_reps_path=None, case=None):
    """Full pipeline on one grid; returns ``(LevelResult, solution, pipeline)``."""
    ny = nx if ny is None else ny
    cfg = cfg or SolverConfig()
    case = case or mms.get_case(case_id, materials)
    t0 = time.perf_counter()
    pipe = build(case, nx, ny)
    if dump_matrix_path:
        dump_matrix(pipe.system, dump_matrix_path)
    if dump_reps_path:
        dump_reps(pipe.table, dump_reps_path)
    x, stats = solve(pipe.system, cfg)
    elapsed = time.perf_counter() - t0
    N = pipe.grid.n_nodes
    ex = exact_vector(case, pipe.grid, pipe.classification.sides)
    l1 = error_norms(x[:N], ex[:N], pipe.grid)
    l2 = error_norms(x[N:], ex[N:], pipe.grid)
    res = LevelResult(nx, ny, l1[0], l1[1], l2[0], l2[1], stats.iterations, stats.residual,
                      elapsed, dict(pipe.table.stats))
    return res, x, pipe


def parse_grids(text, default_ratio=None):
    """``"20,40"`` or ``"40x30,80x60"`` into a list of ``(nx, ny)``."""
    out = []
    for tok in str(text).split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        if "x" in tok:
            a, b = tok.split("x")
            out.append((int(a), int(b)))
        else:
            out.append((int(tok), int(tok)))
    return out


def refine_study(case_id, grids=None, cfg: Optional[SolverConfig] = None, materials=None,
                 csv_path=None, case=None, threads=1) -> ConvergenceReport:
    """Run ``case_id`` over ``grids``; a failing level is recorded and skipped.

    With ``threads > 1`` levels run concurrently; the report is still ordered
    by grid size.
    """
    case = case or mms.get_case(case_id, materials)
    grids = list(grids) if grids is not None else list(case.grids)
    for a, b in zip(grids, grids[1:]):
        if b[0] < a[0] or b[1] < a[1]:
            raise ValueError("grid list must be increasing")

    def level(g):
        try:
            return run_case(case.id, g[0], g[1], cfg, case=case)[0]
        except MIBError as e:
            return e

    if threads > 1 and len(grids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(level, grids))
    else:
        results = [level(g) for g in grids]
    rep = ConvergenceReport(str(case.id))
    for (nx, ny), out in zip(grids, results):
        if isinstance(out, MIBError):
            log.error("level %dx%d failed: %s", nx, ny, out)
            rep.errors.append(((nx, ny), out))
        else:
            rep.levels.append(out)
    if csv_path:
        write_csv(rep, csv_path)
    return rep


def truncation_residual(case, nx, ny=None):
    """``(||A u* - b||_inf, max row norm, regular-row residual)`` for exact ``u*``."""
    ny = nx if ny is None else ny
    pipe = build(case, nx, ny)
    sysm = pipe.system
    ex = exact_vector(case, pipe.grid, pipe.classification.sides)
    r = sysm.A @ ex - sysm.rhs
    row_scale = float(np.max(np.abs(sysm.A).sum(axis=1)))
    irr = pipe.classification.irregular9.ravel()
    reg = np.concatenate([~irr, ~irr])
    return float(np.max(np.abs(r))), row_scale, float(np.max(np.abs(r[reg])))


__all__ = ["error_norms", "compute_order", "run_case", "refine_study", "ConvergenceReport",
           "LevelResult", "write_csv", "parse_grids", "build", "truncation_residual",
           "StageError", "CSV_COLUMNS"]
