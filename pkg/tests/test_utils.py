import math

import numpy as np
import pytest

from semiexplicit import utils


@pytest.mark.parametrize(
    "T, dt, steps",
    [(1.0, 0.1, 10), (1.0, 0.01, 100), (1.0, 0.3, 3), (1.0, -0.1, 10), (0.0, 0.1, 0)],
)
def test_step_count(T, dt, steps):
    assert utils.step_count(T, dt) == steps


def test_step_count_zero_step():
    with pytest.raises(ValueError):
        utils.step_count(1.0, 0.0)


def test_relative_error():
    assert utils.relative_error(1.1, 1.0) == pytest.approx(0.1)
    assert utils.relative_error(-1.0, -2.0) == 0.5


def test_relative_error_zero_reference():
    assert utils.relative_error(0.5, 0.0) == 0.5


def test_numerical_jacobian_of_linear_map():
    A = np.array([[1.0, 2.0], [-3.0, 0.5], [0.0, 4.0]])
    jacobian = utils.numerical_jacobian(lambda v: A @ v, [0.3, -0.7])
    assert jacobian.shape == (3, 2)
    assert np.allclose(jacobian, A, rtol=0, atol=1e-9)


def test_numerical_jacobian_step():
    with pytest.raises(ValueError):
        utils.numerical_jacobian(lambda v: v, [1.0], h=0.0)


def test_symplectic_form():
    assert utils.symplectic_form(1).tolist() == [[0.0, 1.0], [-1.0, 0.0]]
    J = utils.symplectic_form(3)
    assert np.array_equal(J.T, -J)
    assert np.array_equal(J @ J, -np.eye(6))


def test_rotation_is_symplectic():
    theta = 0.3
    rotation = [[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]]
    assert utils.symplecticity_defect(rotation) < 1e-15


def test_stretch_is_not_symplectic():
    assert utils.symplecticity_defect(np.diag([2.0, 1.0])) == 1.0


def test_symplecticity_defect_needs_even_square_matrix():
    with pytest.raises(ValueError):
        utils.symplecticity_defect(np.eye(3))


def test_loglog_slope():
    x = [0.1, 0.05, 0.02, 0.01]
    assert utils.fit_loglog_slope(x, [v**3 for v in x]) == pytest.approx(3.0)


def test_loglog_slope_drops_zero_errors():
    x = [0.1, 0.05, 0.02, 0.01]
    y = [v**2 for v in x[:-1]] + [0.0]
    assert utils.fit_loglog_slope(x, y) == pytest.approx(2.0)


def test_loglog_slope_needs_two_points():
    assert math.isnan(utils.fit_loglog_slope([0.1, 0.2], [1e-3, 0.0]))


def test_linear_slope():
    t = [0.0, 1.0, 2.0, 3.0]
    assert utils.fit_linear_slope(t, [2 * v + 1 for v in t]) == pytest.approx(2.0)


def test_linear_slope_of_constant_signal():
    assert utils.fit_linear_slope([0.0, 1.0, 2.0], [1e-9, 1e-9, 1e-9]) == 0.0
