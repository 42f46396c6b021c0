"""Symmetric projection onto the invariant submanifold of the doubled system.

Given `zeta_n` on the submanifold, the step looks for `mu` such that the base
step started from `zeta_n + A^T mu`, then shifted again by `A^T mu`, lands
back on it. Since `A A^T = 2I` this is the root of

    f(mu) = A base_step(dt, zeta_n + A^T mu) + 2 mu

whose Jacobian is `4I` at `dt = 0`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..core.model import HamiltonianModel
from ..core.phase import (
    DefectVector,
    ExtendedPoint,
    PhasePoint,
    average_restrict,
    defect,
    embed,
    shift,
)
from ..extended.flows import BaseStep

logger = logging.getLogger(__name__)

SOLVER_IDS = ("simplified_newton", "broyden")

# Rank-one updates with a smaller denominator are skipped.
BROYDEN_MIN_DENOMINATOR = 1e-30

# Slack on the post-shift defect check, relative to the state size.
DEFECT_ROUNDING = 1e-12


class NumericalFailureError(ArithmeticError):
    """For when a solver meets a non-finite residual or stage value."""

    def __init__(self, message="Solver produced non-finite values."):
        self.message = message
        super().__init__(self.message)


class ProjectionDefectError(ArithmeticError):
    """For when a converged projection leaves the copies further apart than
    the solver tolerance allows."""

    pass


@dataclass(frozen=True, slots=True)
class SolverConfig:
    """Stopping rule and method for the per-step nonlinear solve."""

    eps: float = 1e-10
    max_iterations: int = 100
    method: str = "simplified_newton"

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError(f"Solver tolerance must be positive (got {self.eps}).")
        if not isinstance(self.max_iterations, int) or self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be an integer >= 1 (got {self.max_iterations})."
            )
        if self.method not in SOLVER_IDS:
            raise ValueError(
                f"'{self.method}' is not a valid solver ({', '.join(SOLVER_IDS)})."
            )


@dataclass(frozen=True, slots=True)
class SolverStats:
    """Per-step solver telemetry.

    `iterations` counts residual evaluations (stage-equation sweeps for IRK), so a
    step that is already converged at the starting guess reports 1.
    `final_update_norm` is the size of the update the stopping rule looked at
    last.
    """

    iterations: int
    final_update_norm: float
    converged: bool


@dataclass(frozen=True, slots=True)
class Projection:
    """A solved projection with the base-step output it was accepted on."""

    mu: DefectVector
    stats: SolverStats
    propagated: ExtendedPoint
    residual: DefectVector


@dataclass(frozen=True, slots=True)
class ProjectedStep:
    """Result of `project_step`."""

    state: PhasePoint
    stats: SolverStats
    defect_norm: float
    mu: DefectVector


def _evaluate(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, mu: DefectVector
) -> tuple[DefectVector, ExtendedPoint]:
    propagated = base_step(dt, shift(zeta_n, mu))
    value = defect(propagated) + 2.0 * mu
    if not (np.all(np.isfinite(value.mu1)) and np.all(np.isfinite(value.mu2))):
        raise NumericalFailureError(
            f"Non-finite projection residual at dt={dt} (|mu|={mu.norm():.3e})."
        )
    return value, propagated


def residual(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, mu: DefectVector
) -> DefectVector:
    """Evaluate `f(mu) = defect(base_step(dt, shift(zeta_n, mu))) + 2 mu`."""
    value, _ = _evaluate(base_step, dt, zeta_n, mu)
    return value


def _log_failure(name: str, stats: SolverStats, dt: float) -> None:
    logger.debug(
        "%s stopped after %d iterations without converging "
        + "(dt=%g, last update norm %.3e)",
        name,
        stats.iterations,
        dt,
        stats.final_update_norm,
    )


def _simplified_newton(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, cfg: SolverConfig
) -> Projection:
    mu = DefectVector.zeros(zeta_n.dim)
    value, propagated = _evaluate(base_step, dt, zeta_n, mu)
    iterations = 1
    while True:
        update = -0.25 * value
        update_norm = update.norm()
        if update_norm < cfg.eps or iterations >= cfg.max_iterations:
            break
        mu = mu + update
        value, propagated = _evaluate(base_step, dt, zeta_n, mu)
        iterations += 1
    stats = SolverStats(iterations, update_norm, update_norm < cfg.eps)
    if not stats.converged:
        _log_failure("simplified Newton", stats, dt)
    return Projection(mu, stats, propagated, value)


def _broyden(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, cfg: SolverConfig
) -> Projection:
    n = 2 * zeta_n.dim
    inverse = 0.25 * np.eye(n)
    mu = DefectVector.zeros(zeta_n.dim)
    value, propagated = _evaluate(base_step, dt, zeta_n, mu)
    f = value.flatten()
    iterations = 1
    while True:
        step = -(inverse @ f)
        update_norm = float(np.linalg.norm(step))
        if update_norm < cfg.eps or iterations >= cfg.max_iterations:
            break
        mu = mu + DefectVector.from_flat(step)
        value, propagated = _evaluate(base_step, dt, zeta_n, mu)
        f_new = value.flatten()
        inverse_df = inverse @ (f_new - f)
        denominator = float(step @ inverse_df)
        if abs(denominator) >= BROYDEN_MIN_DENOMINATOR:
            inverse += np.outer(step - inverse_df, step @ inverse) / denominator
        f = f_new
        iterations += 1
    if not np.all(np.isfinite(inverse)):
        raise NumericalFailureError("Broyden inverse Jacobian became non-finite.")
    stats = SolverStats(iterations, update_norm, update_norm < cfg.eps)
    if not stats.converged:
        _log_failure("Broyden", stats, dt)
    return Projection(mu, stats, propagated, value)


def solve_projection(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, cfg: SolverConfig
) -> Projection:
    """Solve `f(mu) = 0` with the method named by `cfg`, starting from `mu = 0`."""
    if cfg.method == "broyden":
        return _broyden(base_step, dt, zeta_n, cfg)
    return _simplified_newton(base_step, dt, zeta_n, cfg)


def simplified_newton(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, cfg: SolverConfig
) -> tuple[DefectVector, SolverStats]:
    """Fixed-Jacobian iteration `mu <- mu - f(mu) / 4` from `mu = 0`.

    Stops once `|mu_{k+1} - mu_k| < eps` and returns `mu_k`, the iterate whose
    residual was evaluated last, or gives up after `max_iterations` residual
    evaluations with `converged=False`.
    """
    projection = _simplified_newton(base_step, dt, zeta_n, cfg)
    return projection.mu, projection.stats


def broyden(
    base_step: BaseStep, dt: float, zeta_n: ExtendedPoint, cfg: SolverConfig
) -> tuple[DefectVector, SolverStats]:
    """Good Broyden iteration on the inverse Jacobian, starting from `I / 4`.

    The first update therefore equals the simplified Newton one. The stopping
    rule is the same as `simplified_newton`.
    """
    projection = _broyden(base_step, dt, zeta_n, cfg)
    return projection.mu, projection.stats


def project_step(
    model: HamiltonianModel,
    base_step: BaseStep,
    dt: float,
    z_n: PhasePoint,
    cfg: SolverConfig,
) -> ProjectedStep:
    """One semiexplicit step, keeping the shift and the final copy defect.

    The base-step output accepted by the solver is reused for the final shift.
    """
    model.check_state(z_n)
    zeta_n = embed(z_n)
    projection = solve_projection(base_step, dt, zeta_n, cfg)
    zeta_next = shift(projection.propagated, projection.mu)
    defect_size = defect(zeta_next).norm()
    if projection.stats.converged:
        scale = float(np.max(np.abs(zeta_next.flatten())))
        bound = 4.0 * cfg.eps + DEFECT_ROUNDING * (1.0 + scale)
        if defect_size > bound:
            raise ProjectionDefectError(
                f"Post-shift defect {defect_size:.3e} exceeds {bound:.3e}."
            )
    return ProjectedStep(
        average_restrict(zeta_next), projection.stats, defect_size, projection.mu
    )


def semiexplicit_step(
    model: HamiltonianModel,
    base_step: BaseStep,
    dt: float,
    z_n: PhasePoint,
    cfg: SolverConfig,
) -> tuple[PhasePoint, SolverStats]:
    """Advance `z_n` by `dt` with the projected extended-phase-space method.

    Args:
        model: Model the base step was built for.
        base_step: Symmetric explicit step of the doubled system.
        dt: Time step, may be negative.
        z_n: Current canonical state.
        cfg: Solver settings.

    Returns:
        The new canonical state and the solver stats. Non-convergence is
        flagged in the stats, not raised.
    """
    step = project_step(model, base_step, dt, z_n, cfg)
    return step.state, step.stats
