"""Command-line entry point: ``mib-elasticity run`` and ``mib-elasticity converge``."""
from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys

from . import mms
from .errors import Breakdown, GeometryError, MIBError, Unconverged
from .harness import (ConvergenceReport, StageError, parse_grids, refine_study, run_case,
                      write_csv)
from .solver import PRECONDITIONERS, SolverConfig

log = logging.getLogger("mib_elasticity")

EXIT_OK, EXIT_ERROR, EXIT_UNCONVERGED, EXIT_GEOMETRY = 0, 1, 2, 3

# config-file keys mirror the long flag names
CONFIG_KEYS = {"case": str, "grid": str, "grids": str, "tol": float, "max-iter": int,
               "precond": str, "csv": str, "dump-matrix": str, "dump-reps": str}


def read_config(path):
    """Key-value file, with or without a section header; returns a flat dict."""
    text = open(path).read()
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError:
        cp.read_string("[mib]\n" + text)
    out = {}
    for sec in cp.sections():
        for k, v in cp.items(sec):
            k = k.replace("_", "-")
            if k not in CONFIG_KEYS:
                raise ValueError(f"unknown config key {k!r}")
            out[k] = CONFIG_KEYS[k](v)
    return out


def _parse_grid(text):
    g = parse_grids(text)
    if len(g) != 1:
        raise ValueError(f"expected a single NXxNY grid, got {text!r}")
    return g[0]


def build_parser():
    p = argparse.ArgumentParser(prog="mib-elasticity",
                                description="MIB solver for 2D elasticity interface problems")
    p.add_argument("--config", help="key-value file; command-line flags take precedence")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--case", choices=list(mms.CASE_IDS + mms.FIXTURE_IDS))
        sp.add_argument("--tol", type=float, help="relative residual target (default 1e-10)")
        sp.add_argument("--max-iter", type=int, dest="max_iter")
        sp.add_argument("--precond", choices=PRECONDITIONERS)
        sp.add_argument("--csv")

    r = sub.add_parser("run", help="solve one case on one grid")
    common(r)
    r.add_argument("--grid", help="NXxNY, e.g. 80x80")
    r.add_argument("--dump-matrix", dest="dump_matrix")
    r.add_argument("--dump-reps", dest="dump_reps")

    c = sub.add_parser("converge", help="grid refinement study")
    common(c)
    c.add_argument("--grids", help="comma list, e.g. 20,40,80 or 40x30,80x60")
    return p


def _merge(args, cfg):
    """Fill unset flags from the config dict."""
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, val)
    return args


def _solver_config(args):
    kw = {}
    if args.tol is not None:
        kw["rel_tol"] = args.tol
    if args.max_iter is not None:
        kw["max_iter"] = args.max_iter
    if args.precond is not None:
        kw["precond"] = args.precond
    return SolverConfig(**kw)


def threads_from_env(default=1):
    v = os.environ.get("MIB_THREADS")
    if not v:
        return default
    n = int(v)
    if n < 1:
        raise ValueError("MIB_THREADS must be a positive integer")
    return n


def _exit_code(err):
    if isinstance(err, StageError):
        err = err.cause
    if isinstance(err, GeometryError):
        return EXIT_GEOMETRY
    if isinstance(err, (Unconverged, Breakdown)):
        return EXIT_UNCONVERGED
    return EXIT_ERROR


def cmd_run(args):
    if args.case is None or args.grid is None:
        raise ValueError("run needs --case and --grid")
    nx, ny = _parse_grid(args.grid)
    res, _, _ = run_case(args.case, nx, ny, _solver_config(args),
                         dump_matrix_path=args.dump_matrix, dump_reps_path=args.dump_reps)
    rep = ConvergenceReport(str(args.case), [res])
    print(rep.table())
    print(f"residual {res.residual:.3e} after {res.iters} iterations")
    if args.csv:
        write_csv(rep, args.csv)
    return EXIT_OK


def cmd_converge(args):
    if args.case is None:
        raise ValueError("converge needs --case")
    grids = parse_grids(args.grids) if args.grids else None
    rep = refine_study(args.case, grids, _solver_config(args), csv_path=args.csv,
                       threads=threads_from_env())
    print(rep.table())
    for (nx, ny), err in rep.errors:
        print(f"level {nx}x{ny} failed: {err}", file=sys.stderr)
    if rep.errors:
        return max(_exit_code(e) for _, e in rep.errors)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            _merge(args, read_config(args.config))
        handler = cmd_run if args.command == "run" else cmd_converge
        return handler(args)
    except MIBError as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_code(e)
    except (KeyError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
