import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mib_elasticity import geometry as g
from mib_elasticity.errors import MultiCross
from mib_elasticity.grid import GridSpec, build_grid, classify_nodes


def _line_grid(xs, ys):
    return SimpleNamespace(x=np.asarray(xs, float), y=np.asarray(ys, float))


def bisect(f, a, b, tol=1e-14):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        if (f(m) > 0) == (fa > 0):
            a, fa = m, f(m)
        else:
            b = m
        if b - a < tol:
            break
    return 0.5 * (a + b)


def test_classify_circle_centre_and_corner():
    c = g.circle(0.5)
    assert g.classify_point(c, (0.0, 0.0)) == g.MINUS
    assert g.classify_point(c, (1.0, 1.0)) == g.PLUS


def test_classify_flower_point():
    f = g.flower(0.5, 1 / 7, 5)
    # radius along the +y axis from the polar formula
    r = 0.5 + math.sin(5 * math.pi / 2) / 7
    assert r == pytest.approx(0.642857, abs=1e-6)
    assert g.classify_point(f, (0.0, 0.60)) == g.MINUS


def test_on_interface_snapping():
    c = g.circle(0.5)
    assert g.classify_point(c, (0.5, 0.0)) == g.ON_INTERFACE
    assert c.classify_grid(np.array([0.5]), np.array([0.0]))[0, 0] == g.MINUS


def test_classify_rejects_nonfinite():
    with pytest.raises(ValueError):
        g.classify_point(g.circle(0.5), (math.nan, 0.0))


def test_circle_crossings_on_axis_line():
    grid = _line_grid(np.linspace(-1, 1, 21), [-0.05, 0.0, 0.05])
    cr = [c for c in g.find_crossings(g.circle(0.5), grid) if c.axis == "x" and c.line == 1]
    xs = sorted(c.x for c in cr)
    assert xs == pytest.approx([-0.5, 0.5], abs=1e-12)
    for c in cr:
        assert c.y == 0.0


def test_ellipse_crossings_and_angles():
    e = g.ellipse(1.0, 4.0, 0.35)
    grid = _line_grid(np.linspace(-0.5, 0.5, 22), [-0.01, 0.0, 0.01])
    cr = sorted((c for c in g.find_crossings(e, grid) if c.axis == "x" and c.line == 1),
                key=lambda c: c.x)
    assert [c.x for c in cr] == pytest.approx([-0.35, 0.35], abs=1e-12)
    assert cr[0].theta == pytest.approx(math.pi, abs=1e-12)
    assert cr[1].theta == pytest.approx(0.0, abs=1e-12)


def test_flower_crossing_on_vertical_axis():
    f = g.flower(0.5, 1 / 7, 5)
    grid = _line_grid([-0.05, 0.0, 0.05], np.linspace(-1, 1, 40))
    cr = [c for c in g.find_crossings(f, grid) if c.axis == "y" and c.line == 1 and c.y > 0]
    assert len(cr) == 1
    # brute-force oracle: bisection on the polar radius along x = 0
    y_star = bisect(lambda y: y - (0.5 + math.sin(5 * math.atan2(y, 0.0)) / 7), 0.3, 0.9)
    assert cr[0].y == pytest.approx(y_star, abs=1e-10)
    assert y_star == pytest.approx(0.6428571, abs=1e-7)


def test_normal_angle_circle():
    c = g.circle(0.5)
    assert g.normal_angle(c, (0.5, 0.0)) == pytest.approx(0.0)
    assert g.normal_angle(c, (0.0, 0.5)) == pytest.approx(math.pi / 2)


def test_normal_angle_ellipse_against_fd_gradient():
    e = g.ellipse(1.0, 4.0, 0.35)
    t = math.pi / 4
    x, y = 0.35 * math.cos(t), 0.175 * math.sin(t)
    lvl = lambda a, b: a * a + 4 * b * b
    h = 1e-6
    gx = (lvl(x + h, y) - lvl(x - h, y)) / (2 * h)
    gy = (lvl(x, y + h) - lvl(x, y - h)) / (2 * h)
    assert g.normal_angle(e, (x, y)) == pytest.approx(math.atan2(gy, gx) % (2 * math.pi),
                                                      abs=1e-8)


CURVES = [g.circle(0.5), g.ellipse(1.0, 4.0, 0.35), g.flower(0.5, 1 / 7, 5),
          g.complement(g.circle(0.5))]


@pytest.mark.parametrize("curve", CURVES, ids=["circle", "ellipse", "flower", "complement"])
def test_crossing_frames_and_sides(curve):
    grid = build_grid(GridSpec(-1, 1, -1, 1, 41, 41))
    cls = classify_nodes(grid, curve)
    cr = g.find_crossings(curve, grid, cls.sides)
    assert cr
    for c in cr:
        n1, n2 = c.normal
        t1, t2 = c.tangent
        assert n1 * n1 + n2 * n2 == pytest.approx(1.0, abs=1e-12)
        assert (t1, t2) == (-n2, n1)
        assert abs(n1 * t1 + n2 * t2) < 1e-12
        assert 0.0 <= c.theta < 2 * math.pi
        assert c.theta == pytest.approx(math.atan2(n2, n1) % (2 * math.pi), abs=1e-12)
        eps = 1e-6
        assert g.classify_point(curve, (c.x + eps * n1, c.y + eps * n2)) == g.PLUS
        assert g.classify_point(curve, (c.x - eps * n1, c.y - eps * n2)) == g.MINUS


@pytest.mark.parametrize("curve", CURVES, ids=["circle", "ellipse", "flower", "complement"])
def test_crossings_per_line_even(curve):
    grid = build_grid(GridSpec(-1, 1, -1, 1, 37, 37))
    cr = g.find_crossings(curve, grid)
    counts = {}
    for c in cr:
        counts[(c.axis, c.line)] = counts.get((c.axis, c.line), 0) + 1
    assert all(v % 2 == 0 for v in counts.values())


def test_jigsaw_winding_classification():
    jig = g.jigsaw()
    assert g.classify_point(jig, (0.0, 1.5)) == g.MINUS
    assert g.classify_point(jig, (0.0, 2.9)) == g.PLUS
    assert g.classify_point(jig, (-0.95, 0.05)) == g.PLUS


def test_jigsaw_crossings_lie_on_curve():
    jig = g.jigsaw()
    grid = build_grid(GridSpec(-1, 1, 0, 3, 40, 30))
    for c in g.find_crossings(jig, grid):
        t = jig.nearest_parameter(c.x, c.y)
        x, y = jig.evaluate(t)
        assert math.hypot(x - c.x, y - c.y) < 1e-9


def test_complement_swaps_sides():
    c = g.circle(0.5)
    comp = g.complement(c)
    assert g.classify_point(comp, (0.0, 0.0)) == g.PLUS
    assert g.classify_point(comp, (1.0, 1.0)) == g.MINUS
    n = comp.normal(0.5, 0.0)
    assert n[0] == pytest.approx(-1.0)


def test_multicross_reported():
    # a thin sliver crossing one cell edge twice
    f = g.flower(0.5, 0.45, 12)
    grid = build_grid(GridSpec(-1, 1, -1, 1, 6, 6))
    with pytest.raises(MultiCross):
        g.find_crossings(f, grid, on_multi="raise")


@given(st.floats(0.1, 0.9), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_circle_locate_is_on_curve(r0, cx, cy):
    c = g.Circle(r0, cx, cy)
    p = c.locate((cx - 1.5, cy), (cx, cy), g.PLUS, g.MINUS)
    assert math.hypot(p[0] - cx, p[1] - cy) == pytest.approx(r0, abs=1e-11)
