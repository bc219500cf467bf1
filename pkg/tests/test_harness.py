import csv
import math

import numpy as np
import pytest

from mib_elasticity import geometry as g
from mib_elasticity import mms
from mib_elasticity.errors import BadSpec, DegenerateNormal
from mib_elasticity.grid import GridSpec, build_grid
from mib_elasticity.harness import (CSV_COLUMNS, ConvergenceReport, LevelResult, StageError,
                                    compute_order, error_norms, parse_grids, refine_study,
                                    run_case, write_csv)
from mib_elasticity.solver import SolverConfig


class FlatGradient(g.Circle):
    """Circle whose gradient vanishes, so normals cannot be formed."""

    def gradient(self, x, y):
        return 0.0 * x, 0.0 * y


def test_error_norms():
    grid = build_grid(GridSpec(0, 1, 0, 1, 8, 5))
    a = np.random.default_rng(0).normal(size=(5, 8))
    assert error_norms(a, a, grid) == (0.0, 0.0)
    assert error_norms(a + 0.3, a, grid) == pytest.approx((0.3, 0.3))
    e = np.zeros((5, 8))
    e[2, 3] = -2.0
    assert error_norms(e, 0 * e, grid) == pytest.approx((2.0, 2.0 / math.sqrt(40)))


@pytest.mark.parametrize("ec,ef,order", [(4e-4, 1e-4, 2.00), (4.40e-4, 1.10e-4, 2.00),
                                         (2.83e-2, 5.10e-3, 2.47)])
def test_compute_order(ec, ef, order):
    assert round(compute_order(ec, ef), 2) == order


def _level(n, m, err):
    return LevelResult(n, m, err, err, err, err, 1, 0.0, 0.0)


def test_orders_only_between_doubled_grids():
    rep = ConvergenceReport("t", [_level(20, 20, 1e-2), _level(40, 40, 2.5e-3),
                                  _level(60, 60, 1e-3), _level(120, 120, 2e-4)])
    ords = rep.orders("linf_u1")
    assert ords[0] is None and ords[2] is None
    assert ords[1] == pytest.approx(2.0)
    assert ords[3] == pytest.approx(math.log2(5.0))


def test_csv_columns_and_orders(tmp_path):
    rep = ConvergenceReport("t", [_level(20, 20, 1e-2), _level(40, 40, 2.4e-3),
                                  _level(80, 80, 5e-4)])
    path = tmp_path / "out.csv"
    write_csv(rep, path)
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert rows[0]["ord_linf_u1"] == ""
    for a, b in zip(rows, rows[1:]):
        recomputed = math.log2(float(a["linf_u1"]) / float(b["linf_u1"]))
        assert round(recomputed, 3) == round(float(b["ord_linf_u1"]), 3)


def test_parse_grids():
    assert parse_grids("20,40") == [(20, 20), (40, 40)]
    assert parse_grids("40x30, 80X60") == [(40, 30), (80, 60)]


def test_quadratic_fixture_is_exact():
    # a complete factorization removes the iteration tolerance from the error
    rep = refine_study("quadratic", cfg=SolverConfig(precond="lu"))
    assert [lv.nx for lv in rep.levels] == [20, 40, 80]
    for lv in rep.levels:
        assert max(lv.linf_u1, lv.linf_u2) <= 1e-11


def test_zero_fixture():
    res, x, _ = run_case("zero", 20)
    assert res.linf_u1 == 0.0 and res.l2_u2 == 0.0
    assert not x.any()


def test_failed_level_is_recorded():
    rep = refine_study("quadratic", [(4, 4), (20, 20)])
    assert [lv.nx for lv in rep.levels] == [20]
    assert isinstance(rep.errors[0][1], BadSpec)
    with pytest.raises(ValueError):
        refine_study("quadratic", [(40, 40), (20, 20)])


def test_stage_label_on_geometry_failure():
    case = mms.with_curve(mms.get_case("2a"), FlatGradient(0.5))
    with pytest.raises(StageError) as info:
        run_case("2a", 20, case=case)
    assert info.value.stage == "geometry"
    assert isinstance(info.value.cause, DegenerateNormal)


def test_run_is_deterministic_and_threads_do_not_matter():
    a = refine_study("2a", [(20, 20), (40, 40)])
    b = refine_study("2a", [(20, 20), (40, 40)], threads=2)
    for x, y in zip(a.levels, b.levels):
        assert (x.linf_u1, x.l2_u1, x.linf_u2, x.l2_u2) == (y.linf_u1, y.l2_u1, y.linf_u2, y.l2_u2)


def test_material_override_reaches_solver():
    base = run_case("4", 20)[0]
    soft = run_case("4", 20, materials={"mu_minus": 2.0e3})[0]
    assert soft.linf_u1 != base.linf_u1
