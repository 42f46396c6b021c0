from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import lu_factor, lu_solve

from ..core.model import HamiltonianModel
from ..core.phase import FloatArray, PhasePoint
from ..utils import numerical_jacobian
from .projection import NumericalFailureError, SolverConfig, SolverStats

logger = logging.getLogger(__name__)

IRK_ITERATIONS = ("fixed_point", "newton")


@dataclass(frozen=True, slots=True)
class IrkTableau:
    """Butcher tableau of an implicit Runge-Kutta method."""

    a: FloatArray
    b: FloatArray
    c: FloatArray
    order: int
    name: str = "irk"

    def __init__(
        self, a: ArrayLike, b: ArrayLike, c: ArrayLike, order: int, name: str = "irk"
    ) -> None:
        a_arr = np.atleast_2d(np.asarray(a, dtype=np.float64))
        b_arr = np.asarray(b, dtype=np.float64).reshape(-1)
        c_arr = np.asarray(c, dtype=np.float64).reshape(-1)
        s = b_arr.size
        if a_arr.shape != (s, s) or c_arr.size != s:
            raise ValueError(
                f"Inconsistent tableau shapes a{a_arr.shape}, b({s},), "
                + f"c({c_arr.size},)."
            )
        object.__setattr__(self, "a", a_arr)
        object.__setattr__(self, "b", b_arr)
        object.__setattr__(self, "c", c_arr)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "name", name)

    @property
    def stages(self) -> int:
        return self.b.size

    def symplecticity_residual(self) -> float:
        """Max over `i, j` of `|b_i a_ij + b_j a_ji - b_i b_j|`."""
        ba = self.b[:, None] * self.a
        return float(np.max(np.abs(ba + ba.T - np.outer(self.b, self.b))))


def midpoint_tableau() -> IrkTableau:
    """Implicit midpoint rule."""
    return IrkTableau([[0.5]], [1.0], [0.5], 2, "midpoint")


def gauss_legendre4_tableau() -> IrkTableau:
    """Two-stage Gauss-Legendre collocation."""
    r = math.sqrt(3.0) / 6.0
    return IrkTableau(
        [[0.25, 0.25 - r], [0.25 + r, 0.25]],
        [0.5, 0.5],
        [0.5 - r, 0.5 + r],
        4,
        "irk4",
    )


def _stage_states(z: FloatArray, dt: float, a: FloatArray, K: FloatArray) -> FloatArray:
    return z[None, :] + dt * (a @ K)


def _newton_increment(
    model: HamiltonianModel,
    dt: float,
    a: FloatArray,
    stages: FloatArray,
    residual: FloatArray,
) -> FloatArray:
    s, n = residual.shape
    jacobian = np.eye(s * n)
    for i, stage in enumerate(stages):
        block = numerical_jacobian(model.vector_field, stage)
        for j in range(s):
            jacobian[i * n : (i + 1) * n, j * n : (j + 1) * n] -= dt * a[i, j] * block
    increment = -lu_solve(
        lu_factor(jacobian, check_finite=False),
        residual.reshape(-1),
        check_finite=False,
    )
    return increment.reshape(s, n)


def irk_step(
    model: HamiltonianModel,
    tableau: IrkTableau,
    dt: float,
    z_n: PhasePoint,
    cfg: SolverConfig,
    iteration: str = "fixed_point",
) -> tuple[PhasePoint, SolverStats]:
    """Advance `z_n` by `dt`, solving the stage equations for the derivatives `K`.

    `K_i = F(z_n + dt sum_j a_ij K_j)` is iterated from `K = 0`, either as a
    fixed-point iteration or by full Newton with a central-difference Jacobian
    of the vector field. Each iteration evaluates the stage equations once.

    The stopping rule looks at the stage increment `dt a dK`. Once its norm is
    below `cfg.eps` the solve stops and keeps the stages that increment was
    computed from, so the stages are accurate to about `eps` and not to
    whatever the next update would have reached.
    """
    model.check_state(z_n)
    if iteration not in IRK_ITERATIONS:
        raise ValueError(
            f"'{iteration}' is not a valid stage iteration "
            + f"({', '.join(IRK_ITERATIONS)})."
        )
    if dt == 0.0:
        return z_n, SolverStats(1, 0.0, True)

    z = z_n.flatten()
    a = tableau.a
    K = np.zeros((tableau.stages, z.size))
    iterations = 0
    while True:
        stages = _stage_states(z, dt, a, K)
        field = np.array([model.vector_field(stage) for stage in stages])
        iterations += 1
        if iteration == "newton":
            increment = _newton_increment(model, dt, a, stages, K - field)
        else:
            increment = field - K
        if not np.all(np.isfinite(increment)):
            raise NumericalFailureError(
                f"Non-finite {tableau.name} stage update at dt={dt}."
            )
        update_norm = float(np.linalg.norm(dt * (a @ increment)))
        if update_norm < cfg.eps or iterations >= cfg.max_iterations:
            break
        K = K + increment

    stats = SolverStats(iterations, update_norm, update_norm < cfg.eps)
    if not stats.converged:
        logger.debug(
            "%s %s stopped after %d iterations without converging "
            + "(dt=%g, last update norm %.3e)",
            tableau.name,
            iteration,
            iterations,
            dt,
            update_norm,
        )
    z_next = z + dt * (tableau.b @ K)
    if not np.all(np.isfinite(z_next)):
        raise NumericalFailureError(f"Non-finite {tableau.name} step at dt={dt}.")
    return PhasePoint.from_flat(z_next), stats
