from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from .core.phase import FloatArray, as_vector

# absorbs rounding in T / dt so that e.g. 1 / 0.1 counts 10 steps
STEP_COUNT_SLACK = 1e-9


def step_count(T: float, dt: float) -> int:
    """Number of whole steps of size `|dt|` that fit in `[0, T]`."""
    if dt == 0:
        raise ValueError("Time step must be nonzero.")
    if T <= 0:
        return 0
    return math.floor(T / abs(dt) + STEP_COUNT_SLACK)


def relative_error(value: float, reference: float) -> float:
    """`(value - reference) / |reference|`, or the absolute difference when
    the reference is exactly zero."""
    if reference == 0:
        return value - reference
    return (value - reference) / abs(reference)


def numerical_jacobian(
    func: Callable[[FloatArray], FloatArray], x: ArrayLike, h: float = 1e-6
) -> FloatArray:
    """Central finite-difference Jacobian of `func` at `x`.

    Column `j` holds `(func(x + h e_j) - func(x - h e_j)) / 2h`.
    """
    if h <= 0:
        raise ValueError("Finite-difference step must be positive.")
    point = as_vector(x)
    columns = []
    for j in range(point.size):
        forward, backward = point.copy(), point.copy()
        forward[j] += h
        backward[j] -= h
        columns.append((as_vector(func(forward)) - as_vector(func(backward))) / (2 * h))
    return np.column_stack(columns)


def symplectic_form(n: int) -> FloatArray:
    """Canonical `J_2n = [[0, I], [-I, 0]]` for flat vectors ordered as
    `(positions, momenta)`."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplecticity_defect(jacobian: ArrayLike) -> float:
    """Largest entry of `|M^T J M - J|`."""
    M = np.asarray(jacobian, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ValueError(f"Expected a square matrix of even size, got {M.shape}.")
    J = symplectic_form(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of `log y` against `log x`.

    Non-positive `y` values (errors at exactly zero) are dropped; `nan` is
    returned when fewer than two points remain.
    """
    pairs = [(a, b) for a, b in zip(x, y, strict=True) if a > 0 and b > 0]
    if len(pairs) < 2:
        return math.nan
    xs, ys = zip(*pairs, strict=True)
    return float(stats.linregress(np.log(xs), np.log(ys)).slope)


def fit_linear_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of `y` against `x`; 0 for a constant signal."""
    if len(x) < 2:
        return math.nan
    if np.ptp(np.asarray(y, dtype=np.float64)) == 0:
        return 0.0
    return float(stats.linregress(x, y).slope)
