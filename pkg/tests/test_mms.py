import math

import numpy as np
import pytest

from mib_elasticity import geometry as g
from mib_elasticity import mms
from mib_elasticity.grid import GridSpec, build_grid, classify_nodes
from mib_elasticity.jets import Jet
from mib_elasticity.material import MINUS, PLUS, constant_field, eval_field


def _crossings(case, n=40):
    a, b, c, d = case.domain
    grid = build_grid(GridSpec(a, b, c, d, n, n))
    cls = classify_nodes(grid, case.curve)
    return g.find_crossings(case.curve, grid, cls.sides)


def _sample(crossings, k=64):
    idx = np.linspace(0, len(crossings) - 1, min(k, len(crossings))).astype(int)
    return [crossings[i] for i in idx]


def test_exact_values():
    c1 = mms.get_case("1a")
    assert float(mms.eval_exact(c1, PLUS, (0.0, 0.0)).u1.v) == pytest.approx(math.sin(1.0))
    c2 = mms.get_case("2a")
    assert float(mms.eval_exact(c2, PLUS, (1.0, 0.0)).u1.v) == pytest.approx(-1.0)
    z = mms.get_case("zero")
    e = mms.eval_exact(z, PLUS, (0.3, -0.2))
    assert all(float(v) == 0.0 for v in e.u1.tuple() + e.u2.tuple())


def test_example2_minus_branch_rejects_origin():
    with pytest.raises(ValueError):
        mms.eval_exact(mms.get_case("2a"), MINUS, (0.0, 0.0))


def test_force_hand_value():
    # u1 = x^2 with nu = 0.25 and mu = lambda = 1
    case = mms.CaseDefinition("t", mms.UNIT, None, constant_field(1.0, 0.25, 1.0, 0.25),
                              lambda X, Y: mms.Exact(X * X, Jet(0.0 * X.v)),
                              lambda X, Y: mms.Exact(X * X, Jet(0.0 * X.v)), "weak")
    f1, f2 = mms.eval_force(case, PLUS, (0.3, 0.7))
    assert f1 == pytest.approx(-6.0)
    assert f2 == pytest.approx(0.0)


def test_zero_fixture_force_and_boundary():
    z = mms.get_case("zero")
    assert mms.eval_force(z, PLUS, (0.2, 0.1)) == (0.0, 0.0)
    assert mms.eval_boundary(z, (1.0, 1.0)) == (0.0, 0.0)


def _fd_force(case, side, x, y, h=5e-4):
    """-div T from displacement values only (fourth-order differences, nested)."""
    w = np.array([1.0, -8.0, 8.0, -1.0]) / (12 * h)
    offs = np.array([-2, -1, 1, 2]) * h

    def u(px, py):
        e = mms.eval_exact(case, side, (px, py))
        return np.array([e.u1.v, e.u2.v], dtype=float)

    def stress(px, py):
        gx = sum(wk * u(px + o, py) for wk, o in zip(w, offs))
        gy = sum(wk * u(px, py + o) for wk, o in zip(w, offs))
        m = eval_field(case.field, side, (px, py))
        eps = np.array([[gx[0], 0.5 * (gy[0] + gx[1])], [0.5 * (gy[0] + gx[1]), gy[1]]])
        return m.lam * np.trace(eps) * np.eye(2) + 2 * m.mu * eps

    dsx = sum(wk * stress(x + o, y) for wk, o in zip(w, offs))
    dsy = sum(wk * stress(x, y + o) for wk, o in zip(w, offs))
    div = dsx[:, 0] + dsy[:, 1]
    return -div


@pytest.mark.parametrize("case_id", ["1a", "2a", "3a", "4", "5", "6", "7", "8"])
def test_force_matches_fd_divergence(case_id):
    case = mms.get_case(case_id)
    a, b, c, d = case.domain
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 6:
        x, y = rng.uniform(a, b), rng.uniform(c, d)
        side = case.curve.side(x, y)
        ring = [case.curve.side(x + 0.03 * math.cos(t), y + 0.03 * math.sin(t))
                for t in np.linspace(0, 2 * math.pi, 16)]
        if any(r != side for r in ring):
            continue
        F = np.array(mms.eval_force(case, side, (x, y)), dtype=float)
        Fd = _fd_force(case, side, x, y)
        scale = max(np.max(np.abs(F)), float(eval_field(case.field, side, (x, y)).mu))
        assert np.max(np.abs(F - Fd)) <= 1e-6 * scale
        checked += 1


@pytest.mark.parametrize("case_id", ["1a", "1c", "2a", "3a", "6", "7"])
def test_weak_cases_are_continuous(case_id):
    case = mms.get_case(case_id)
    for s in _sample(_crossings(case)):
        jd = mms.eval_jumps(case, s)
        assert max(abs(jd.b[0]), abs(jd.b[1])) <= 1e-10


def test_example1_continuous_on_axis_point():
    jd = mms.eval_jumps(mms.get_case("1a"), ((0.35, 0.0), (1.0, 0.0)))
    assert jd.b == pytest.approx((0.0, 0.0), abs=1e-14)


def test_strong_case_jump_value():
    case = mms.get_case("4")
    for s in _sample(_crossings(case), 16):
        x, y = s.position
        jd = mms.eval_jumps(case, s)
        assert jd.b[0] == pytest.approx(-x * x - 4 * y * y + 0.1225, abs=1e-12)
    assert any(abs(mms.eval_jumps(case, s).b[0]) > 1e-3 for s in _crossings(case))


def test_smooth_fixture_has_no_traction_jump():
    case = mms.get_case("smooth")
    for s in _sample(_crossings(case), 16):
        jd = mms.eval_jumps(case, s)
        assert jd.T == pytest.approx((0.0, 0.0), abs=1e-8)
        assert jd.b == pytest.approx((0.0, 0.0), abs=1e-14)


@pytest.mark.parametrize("case_id", mms.CASE_IDS)
def test_traction_two_routes(case_id):
    case = mms.get_case(case_id)
    for s in _sample(_crossings(case)):
        p, n = s.position, np.asarray(s.normal, dtype=float)
        t = []
        for side in (PLUS, MINUS):
            e = mms.eval_exact(case, side, p)
            m = eval_field(case.field, side, p)
            grad = np.array([[e.u1.x, e.u1.y], [e.u2.x, e.u2.y]], dtype=float)
            eps = 0.5 * (grad + grad.T)
            T = m.lam * np.trace(eps) * np.eye(2) + 2 * m.mu * eps
            t.append(T @ n)
        ref = t[0] - t[1]
        jd = mms.eval_jumps(case, s)
        scale = max(np.max(np.abs(t[0])), np.max(np.abs(t[1])), 1.0)
        assert np.max(np.abs(np.array(jd.T) - ref)) <= 1e-9 * scale


def test_boundary_values():
    # benchmark curves put the enclosed region on the plus side, so corners
    # of the box take the minus branch
    c2 = mms.get_case("2a")
    r0, c0 = 0.5, -0.1
    const = -r0 ** 2 + (r0 ** 4 + c0 * math.log(2 * r0)) / 10
    expect = -(4.0 + c0 * math.log(2 * math.sqrt(2.0))) / 10 + const
    assert mms.eval_boundary(c2, (1.0, 1.0))[0] == pytest.approx(expect, rel=1e-14)
    c1 = mms.get_case("1a")
    expect = 0.25 + math.sin(1.5) - 0.5 + 1.25 - 0.35 ** 2
    assert mms.eval_boundary(c1, (0.5, 0.5))[0] == pytest.approx(expect, rel=1e-14)


def test_boundary_plus_branch_without_curve():
    q = mms.get_case("quadratic")
    assert mms.eval_boundary(q, (1.0, -1.0)) == pytest.approx((1 - 1 - 1 + 1 + 1, 2 + -1 - 3 + 1))


def test_material_override():
    case = mms.get_case("4", {"mu_plus": 3.0e6})
    m = eval_field(case.field, PLUS, (0.0, 0.0))
    assert m.mu == pytest.approx(3.0e6)
    assert m.nu == pytest.approx(0.20)
    with pytest.raises(ValueError):
        mms.get_case("6", {"mu_plus": 1.0})


def test_unknown_case():
    with pytest.raises(KeyError):
        mms.get_case("9")
