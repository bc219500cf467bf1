import numpy as np
import pytest
from hypothesis import given, strategies as st

from mib_elasticity.jets import Jet, cos, exp, log, sin


def _f(X, Y):
    return sin(X * Y + 1) * exp(-(X * X)) + log(2 + X * X + Y ** 2) / (3 + cos(Y)) - X ** 3


def _fd(x, y, h=1e-4):
    f = lambda a, b: _f(Jet(a), Jet(b)).v
    fx = (f(x + h, y) - f(x - h, y)) / (2 * h)
    fy = (f(x, y + h) - f(x, y - h)) / (2 * h)
    fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / h ** 2
    fyy = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / h ** 2
    fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h)
    return fx, fy, fxx, fxy, fyy


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_partials_match_finite_differences(x, y):
    J = _f(*Jet.coords(x, y))
    ref = _fd(x, y)
    got = (J.x, J.y, J.xx, J.xy, J.yy)
    for a, b in zip(got, ref):
        assert a == pytest.approx(b, rel=1e-5, abs=1e-5)


def test_array_components():
    x = np.array([0.1, 0.5])
    y = np.array([-0.2, 0.3])
    J = _f(*Jet.coords(x, y))
    for k in range(2):
        s = _f(*Jet.coords(float(x[k]), float(y[k])))
        assert np.allclose([c[k] for c in J.tuple()], s.tuple())


def test_polynomial_exact():
    X, Y = Jet.coords(2.0, 3.0)
    J = X * X * Y - 4 * Y / X
    assert J.tuple() == pytest.approx((12 - 6, 12 + 12 / 4, 4 - 4 / 2,
                                       6 - 12 / 4, 4 + 4 / 4, 0.0))


def test_non_integer_power_rejected():
    with pytest.raises(TypeError):
        Jet(1.0) ** 0.5
