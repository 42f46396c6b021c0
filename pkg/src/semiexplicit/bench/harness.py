from __future__ import annotations

import logging
import time
from collections.abc import Iterator
from dataclasses import dataclass, field

from ..core.integrator import Integrator
from ..core.model import HamiltonianModel
from ..core.phase import ExtendedPoint, FloatArray, PhasePoint
from ..models import build_model
from ..solvers.projection import SolverStats
from ..utils import relative_error, step_count
from .config import RunConfig
from .integrators import build_integrator

logger = logging.getLogger(__name__)


class IntegrationError(RuntimeError):
    """For when a run fails; `step` is the index of the failing step."""

    def __init__(self, step: int, reason: Exception | str):
        self.step = step
        self.reason = reason
        self.message = f"Integration failed at step {step}: {reason}"
        super().__init__(self.message)


@dataclass(frozen=True, slots=True)
class RunTotals:
    """Cumulative counters over every step taken so far, recorded or not."""

    steps: int = 0
    iterations: int = 0
    failures: int = 0
    max_update_norm: float = 0.0
    max_defect: float = 0.0
    elapsed: float = 0.0

    @property
    def mean_iterations(self) -> float | None:
        if self.steps == 0:
            return None
        return self.iterations / self.steps

    def add(
        self, stats: SolverStats | None, defect: float | None, elapsed: float
    ) -> RunTotals:
        iterations, failures, update = self.iterations, self.failures, 0.0
        if stats is not None:
            iterations += stats.iterations
            failures += not stats.converged
            update = stats.final_update_norm
        return RunTotals(
            self.steps + 1,
            iterations,
            failures,
            max(self.max_update_norm, update),
            max(self.max_defect, defect or 0.0),
            elapsed,
        )


@dataclass(frozen=True, slots=True)
class TrajectoryRecord:
    """One recorded row of a run.

    `q` and `p` are the reported canonical pair; extended methods without
    projection also keep the copy `(x, y)`. `invariant_errors` maps `"H"` and
    each named invariant to its relative error against the initial value.
    """

    step: int
    time: float
    q: FloatArray
    p: FloatArray
    invariant_errors: dict[str, float]
    defect_norm: float | None = None
    stats: SolverStats | None = None
    totals: RunTotals = field(default_factory=RunTotals)
    x: FloatArray | None = None
    y: FloatArray | None = None

    @property
    def phase_point(self) -> PhasePoint:
        return PhasePoint(self.q, self.p)


def initial_condition(cfg: RunConfig) -> tuple[HamiltonianModel, PhasePoint]:
    """Model and starting state of `cfg`, honouring `q0` / `p0` overrides."""
    model, z0 = build_model(cfg.model, cfg.nls_n, cfg.vortex_ic)
    if cfg.q0 is not None and cfg.p0 is not None:
        z0 = PhasePoint(cfg.q0, cfg.p0)
        model.check_state(z0)
    return model, z0


def _record(
    k: int,
    dt: float,
    integrator: Integrator,
    state: PhasePoint | ExtendedPoint,
    reference: dict[str, float],
    defect: float | None,
    stats: SolverStats | None,
    totals: RunTotals,
) -> TrajectoryRecord:
    z = integrator.phase_point(state)
    values = integrator.model.invariants(z)
    errors = {
        name: relative_error(values[name], ref) for name, ref in reference.items()
    }
    return TrajectoryRecord(
        k,
        k * dt,
        z.q,
        z.p,
        errors,
        defect,
        stats,
        totals,
        state.x if isinstance(state, ExtendedPoint) else None,
        state.y if isinstance(state, ExtendedPoint) else None,
    )


def run_trajectory(cfg: RunConfig) -> Iterator[TrajectoryRecord]:
    """Step the configured method from its initial condition.

    Yields the initial record and then one record every `cfg.stride` steps;
    `floor(T / |dt|)` steps are taken in total.

    Raises:
        IntegrationError: A step failed numerically; carries its index.
    """
    cfg.validate()
    model, z0 = initial_condition(cfg)
    integrator = build_integrator(cfg, model)
    state = integrator.initial_state(z0)
    reference = model.invariants(z0)
    n_steps = step_count(cfg.T, cfg.dt)
    logger.info(
        "run %s on %s: dt=%g, T=%g, %d steps",
        cfg.label,
        model.name,
        cfg.dt,
        cfg.T,
        n_steps,
    )

    totals = RunTotals()
    defect = 0.0 if integrator.tracks_defect else None
    yield _record(0, cfg.dt, integrator, state, reference, defect, None, totals)

    start = time.perf_counter()
    for k in range(1, n_steps + 1):
        try:
            result = integrator.step(state, cfg.dt)
        except (ArithmeticError, ValueError) as err:
            logger.error("%s failed at step %d: %s", cfg.label, k, err)
            raise IntegrationError(k, err) from err
        state = result.state
        totals = totals.add(result.stats, result.defect, time.perf_counter() - start)
        if k % cfg.stride == 0:
            yield _record(
                k,
                cfg.dt,
                integrator,
                state,
                reference,
                result.defect,
                result.stats,
                totals,
            )

    logger.info(
        "finished %s: %d steps, %d solver failures, %.2fs",
        cfg.label,
        totals.steps,
        totals.failures,
        totals.elapsed,
    )
    if totals.failures:
        logger.warning(
            "%s: solver did not converge on %d of %d steps",
            cfg.label,
            totals.failures,
            totals.steps,
        )
