from __future__ import annotations

import logging
import math
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..core.phase import ExtendedPoint, FloatArray, PhasePoint
from ..utils import (
    fit_linear_slope,
    fit_loglog_slope,
    numerical_jacobian,
    symplecticity_defect,
)
from .config import ConfigError, RunConfig
from .harness import TrajectoryRecord, initial_condition, run_trajectory
from .integrators import build_integrator

logger = logging.getLogger(__name__)

MIN_ORDER_STUDY_STEPS = 4
MIN_DRIFT_RECORDS = 10

# random property-check states are drawn this far from the initial condition,
# relative to its largest entry
PROPERTY_PERTURBATION = 0.05


# ***************************************************** #
# ******************** ORDER STUDY ******************** #
# ***************************************************** #


@dataclass(frozen=True, slots=True)
class OrderStudyRow:
    label: str
    dt: float
    max_error: float


@dataclass(frozen=True)
class OrderStudy:
    """Max relative energy errors over a step-size grid, with the fitted
    log-log slope per method label."""

    rows: tuple[OrderStudyRow, ...]
    slopes: dict[str, float]

    def errors(self, label: str) -> list[float]:
        return [row.max_error for row in self.rows if row.label == label]


def max_energy_error(records: Iterable[TrajectoryRecord]) -> float:
    """Largest `|relative H error|` over `records`."""
    return max((abs(r.invariant_errors["H"]) for r in records), default=0.0)


def order_study(
    templates: RunConfig | Sequence[RunConfig], dts: Sequence[float]
) -> OrderStudy:
    """Run every template at every step size and fit the convergence slopes.

    Args:
        templates: One config per compared method; `dt` and `stride` are
            replaced for each run.
        dts: At least four distinct step sizes spanning at least a decade.

    Returns:
        The error table and one slope per `RunConfig.label`.
    """
    if isinstance(templates, RunConfig):
        templates = [templates]
    sizes = sorted({abs(float(dt)) for dt in dts})
    if len(sizes) < MIN_ORDER_STUDY_STEPS or 0 in sizes:
        raise ConfigError(
            f"An order study needs >= {MIN_ORDER_STUDY_STEPS} distinct nonzero "
            + "step sizes."
        )
    if sizes[-1] < 10 * sizes[0]:
        raise ConfigError("Order study steps must span at least one decade.")

    rows: list[OrderStudyRow] = []
    slopes: dict[str, float] = {}
    for template in templates:
        errors = []
        for dt in dts:
            cfg = template.replace(dt=float(dt), stride=1, out=None)
            error = max_energy_error(run_trajectory(cfg))
            logger.info("%s dt=%g: max relative H error %.3e", cfg.label, dt, error)
            rows.append(OrderStudyRow(template.label, float(dt), error))
            errors.append(error)
        slopes[template.label] = fit_loglog_slope([abs(dt) for dt in dts], errors)
    return OrderStudy(tuple(rows), slopes)


# ************************************************* #
# ******************** REPORTS ******************** #
# ************************************************* #


@dataclass(frozen=True, slots=True)
class DriftSummary:
    max_abs_error: float
    slope: float


def invariant_drift_report(
    records: Iterable[TrajectoryRecord],
) -> dict[str, DriftSummary]:
    """Max `|relative error|` and least-squares drift per unit time for `"H"`
    and every named invariant."""
    records = list(records)
    if len(records) < MIN_DRIFT_RECORDS:
        raise ValueError(
            f"A drift report needs >= {MIN_DRIFT_RECORDS} records "
            + f"(got {len(records)})."
        )
    times = [r.time for r in records]
    report = {}
    for name in records[0].invariant_errors:
        errors = [r.invariant_errors[name] for r in records]
        report[name] = DriftSummary(
            float(np.max(np.abs(errors))), fit_linear_slope(times, errors)
        )
    return report


@dataclass(frozen=True, slots=True)
class IterationReport:
    steps: int
    mean_iterations: float | None
    max_update_norm: float
    max_defect: float
    failures: int


def iteration_report(records: Iterable[TrajectoryRecord]) -> IterationReport:
    """Solver statistics aggregated over every step of the run.

    Capped iteration counts of non-converged steps enter the mean; the number
    of such steps is reported as `failures`.
    """
    tail = deque(records, maxlen=1)
    if not tail or tail[0].totals.steps == 0:
        return IterationReport(0, None, 0.0, 0.0, 0)
    totals = tail[0].totals
    if totals.iterations == 0:
        raise ValueError("The run's method does not use an iterative solver.")
    return IterationReport(
        totals.steps,
        totals.mean_iterations,
        totals.max_update_norm,
        totals.max_defect,
        totals.failures,
    )


# ***************************************************** #
# ******************** RUN SUMMARY ******************** #
# ***************************************************** #


@dataclass
class RunSummary:
    """Incrementally gathered overview of a run."""

    label: str
    records: int = 0
    final: TrajectoryRecord | None = None
    max_errors: dict[str, float] = field(default_factory=dict)

    def watch(
        self, records: Iterable[TrajectoryRecord]
    ) -> Iterator[TrajectoryRecord]:
        """Pass `records` through while updating the summary."""
        for record in records:
            self.records += 1
            self.final = record
            for name, error in record.invariant_errors.items():
                worst = self.max_errors.get(name, 0.0)
                self.max_errors[name] = max(worst, abs(error))
            yield record


# ******************************************************** #
# ******************** PROPERTY CHECK ******************** #
# ******************************************************** #


@dataclass(frozen=True, slots=True)
class PropertyReport:
    samples: int
    max_symplecticity_defect: float
    max_symmetry_error: float


def property_check(cfg: RunConfig, samples: int = 20) -> PropertyReport:
    """Measure symplecticity and symmetry of one step at random states.

    States are drawn around the configured initial condition with
    `cfg.seed`; methods that run in the doubled phase space without
    projection are checked as maps of `R^4d`, all others as maps of `R^2d`.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1.")
    cfg.validate()
    model, z0 = initial_condition(cfg)
    integrator = build_integrator(cfg, model)
    origin = integrator.initial_state(z0)
    extended = isinstance(origin, ExtendedPoint)
    rng = np.random.default_rng(cfg.seed)
    base = origin.flatten()
    scale = PROPERTY_PERTURBATION * (1.0 + float(np.max(np.abs(base))))

    def to_state(v: FloatArray) -> PhasePoint | ExtendedPoint:
        return ExtendedPoint.from_flat(v) if extended else PhasePoint.from_flat(v)

    def step_map(v: FloatArray) -> FloatArray:
        return integrator.step(to_state(v), cfg.dt).state.flatten()

    worst_symplectic = worst_symmetry = 0.0
    for _ in range(samples):
        start = base + scale * rng.standard_normal(base.size)
        jacobian = numerical_jacobian(step_map, start)
        worst_symplectic = max(worst_symplectic, symplecticity_defect(jacobian))
        forward = integrator.step(to_state(start), cfg.dt).state
        back = integrator.step(forward, -cfg.dt).state.flatten()
        error = float(np.max(np.abs(back - start)))
        worst_symmetry = max(worst_symmetry, error)
    if not math.isfinite(worst_symplectic):
        logger.warning("%s: non-finite symplecticity defect", cfg.label)
    return PropertyReport(samples, worst_symplectic, worst_symmetry)
