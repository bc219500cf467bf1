import numpy as np
import pytest
from hypothesis import given, strategies as st

from mib_elasticity.errors import CoincidentNodes
from mib_elasticity.mib.interp import extrapolation_weights, lagrange_weights


def test_midpoint_weights():
    w = lagrange_weights([0.0, 1.0, 2.0], 0.5)
    assert w.w0 == pytest.approx([3 / 8, 3 / 4, -1 / 8])


def test_one_sided_derivative_weights():
    h = 0.1
    w = lagrange_weights([0.0, h, 2 * h], 0.0)
    assert w.w1 == pytest.approx([-3 / (2 * h), 2 / h, -1 / (2 * h)])


def test_extrapolation_weights():
    assert extrapolation_weights() == pytest.approx([3.0, -3.0, 1.0])


def test_coincident_nodes():
    with pytest.raises(CoincidentNodes):
        lagrange_weights([0.0, 1.0, 1.0], 0.3)


@given(st.floats(1e-3, 1.0), st.floats(-2.0, 3.0),
       st.tuples(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5)))
def test_reproduces_quadratics(h, t, coef):
    z = np.array([-0.3, 0.9, 2.0]) * h
    w = lagrange_weights(z, t * h)
    a, b, c = coef
    p = a + b * z + c * z * z
    x = t * h
    assert np.sum(w.w0) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.sum(w.w1)) <= 1e-12 / h * 100
    assert w.w0 @ p == pytest.approx(a + b * x + c * x * x, rel=1e-9, abs=1e-9)
    assert w.w1 @ p == pytest.approx(b + 2 * c * x, rel=1e-7, abs=1e-7)
