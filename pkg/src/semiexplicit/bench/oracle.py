from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike

from ..core.model import HamiltonianModel
from ..core.phase import FloatArray, PhasePoint, as_vector

logger = logging.getLogger(__name__)

Field = Callable[[FloatArray], FloatArray]

# default reference step before any halving
ORACLE_START_STEP = 1e-2
ORACLE_MAX_HALVINGS = 14


class OracleError(RuntimeError):
    """For when halving the reference step never brings successive results
    within tolerance."""

    pass


def rk4_step(field: Field, y: FloatArray, h: float) -> FloatArray:
    """One classical fourth-order Runge-Kutta step."""
    k1 = field(y)
    k2 = field(y + 0.5 * h * k1)
    k3 = field(y + 0.5 * h * k2)
    k4 = field(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_solve(field: Field, y0: ArrayLike, T: float, steps: int) -> FloatArray:
    """Integrate `y' = field(y)` over `[0, T]` with `steps` equal RK4 steps."""
    y = as_vector(y0).copy()
    if steps < 1 or T == 0:
        return y
    h = T / steps
    for _ in range(steps):
        y = rk4_step(field, y, h)
    return y


def converged_solve(
    field: Field,
    y0: ArrayLike,
    T: float,
    tol: float,
    start_step: float = ORACLE_START_STEP,
) -> FloatArray:
    """RK4 with the step halved until two successive results agree to `tol`.

    Raises:
        OracleError: No agreement after `ORACLE_MAX_HALVINGS` halvings, or the
            solution became non-finite.
    """
    if not tol > 0:
        raise ValueError(f"Oracle tolerance must be positive (got {tol}).")
    y0 = as_vector(y0)
    if T == 0:
        return y0.copy()
    steps = max(1, math.ceil(abs(T) / start_step))
    previous = rk4_solve(field, y0, T, steps)
    for _ in range(ORACLE_MAX_HALVINGS):
        steps *= 2
        current = rk4_solve(field, y0, T, steps)
        if not np.all(np.isfinite(current)):
            break
        change = float(np.max(np.abs(current - previous)))
        if change < tol:
            logger.debug("reference converged with %d RK4 steps", steps)
            return current
        previous = current
    raise OracleError(
        f"RK4 reference did not converge to {tol:g} over T={T:g} "
        + f"(last tried {steps} steps)."
    )


def reference_oracle(
    model: HamiltonianModel, z0: PhasePoint, T: float, tol: float
) -> PhasePoint:
    """High-accuracy reference solution of the original system at time `T`."""
    model.check_state(z0)
    solution = converged_solve(model.vector_field, z0.flatten(), T, tol)
    return PhasePoint.from_flat(solution)
