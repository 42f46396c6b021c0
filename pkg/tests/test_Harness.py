import numpy as np
import pytest

from semiexplicit.bench import RunConfig, build_integrator, run_trajectory
from semiexplicit.bench.harness import (
    IntegrationError,
    RunTotals,
    initial_condition,
)
from semiexplicit.bench.integrators import (
    ExtendedSplitting,
    ImplicitRungeKutta,
    Semiexplicit,
)
from semiexplicit.core import ExtendedPoint, InvalidDimensionError, PhasePoint
from semiexplicit.solvers import SolverStats


def test_zero_terminal_time_gives_initial_record(quartic_run):
    records = list(run_trajectory(quartic_run.replace(T=0.0)))
    assert len(records) == 1
    record = records[0]
    assert (record.step, record.time) == (0, 0.0)
    assert record.q.tolist() == [-3.0] and record.p.tolist() == [0.0]
    assert record.invariant_errors == {"H": 0.0}
    assert record.defect_norm == 0.0
    assert record.stats is None


def test_record_count_with_stride(quartic_run):
    records = list(run_trajectory(quartic_run.replace(stride=10)))
    assert [r.step for r in records] == list(range(0, 101, 10))
    assert records[-1].time == pytest.approx(1.0)
    assert records[-1].totals.steps == 100


def test_records_carry_solver_stats(quartic_run):
    records = list(run_trajectory(quartic_run))
    assert len(records) == 101
    assert all(r.stats is not None and r.stats.converged for r in records[1:])
    totals = records[-1].totals
    assert totals.iterations == sum(r.stats.iterations for r in records[1:])
    assert totals.failures == 0
    assert totals.max_defect == max(r.defect_norm for r in records)


def test_quartic_energy_error(quartic_run):
    final = list(run_trajectory(quartic_run))[-1]
    assert abs(final.invariant_errors["H"]) < 1e-4


def test_negative_time_step(quartic_run):
    records = list(run_trajectory(quartic_run.replace(dt=-0.01, T=0.1)))
    assert records[-1].time == pytest.approx(-0.1)
    assert len(records) == 11


def test_projection_suppresses_defect():
    base = RunConfig(model="nls", dt=1e-2, T=1.0, eps=1e-13)
    projected = list(run_trajectory(base))[-1]
    unprojected = list(run_trajectory(base.replace(method="pihajoki")))[-1]
    assert projected.totals.max_defect < 1e-11
    assert unprojected.totals.max_defect > 1e-8


def test_unprojected_run_keeps_copy():
    records = list(run_trajectory(RunConfig(method="pihajoki", T=0.1)))
    last = records[-1]
    assert last.x is not None and last.y is not None
    assert last.defect_norm == pytest.approx(
        np.hypot(last.q[0] - last.x[0], last.p[0] - last.y[0])
    )
    assert last.stats is None
    assert last.totals.iterations == 0


def test_tao_run():
    cfg = RunConfig(model="nls", method="tao", omega=100.0, dt=1e-3, T=0.1)
    final = list(run_trajectory(cfg))[-1]
    assert final.defect_norm is not None and final.defect_norm > 0
    assert abs(final.invariant_errors["total_mass"]) < 1e-4


def test_irk_run_has_no_defect():
    cfg = RunConfig(method="midpoint", T=0.1)
    final = list(run_trajectory(cfg))[-1]
    assert final.defect_norm is None
    assert final.stats is not None and final.stats.converged
    assert final.x is None


def test_vortex_run_tracks_impulses():
    cfg = RunConfig(model="vortex", dt=0.1, T=1.0)
    final = list(run_trajectory(cfg))[-1]
    assert set(final.invariant_errors) == {"H", "Q", "P", "I_angular"}
    assert all(abs(e) < 1e-4 for e in final.invariant_errors.values())


def test_initial_condition_override():
    cfg = RunConfig(q0=(1.0,), p0=(2.0,))
    _, z0 = initial_condition(cfg)
    assert z0 == PhasePoint([1.0], [2.0])


def test_initial_condition_override_dimension():
    with pytest.raises(InvalidDimensionError):
        initial_condition(RunConfig(model="nls", q0=(1.0,), p0=(2.0,)))


def test_diverging_run_reports_step():
    cfg = RunConfig(method="pihajoki", q0=(1e200,), p0=(0.0,))
    with np.errstate(all="ignore"), pytest.raises(IntegrationError) as exc_info:
        list(run_trajectory(cfg))
    assert exc_info.value.step == 1


@pytest.mark.parametrize(
    "changes, kind",
    [
        ({"method": "pihajoki"}, ExtendedSplitting),
        ({"method": "tao", "omega": 10.0}, ExtendedSplitting),
        ({}, Semiexplicit),
        ({"method": "midpoint"}, ImplicitRungeKutta),
        ({"method": "irk4"}, ImplicitRungeKutta),
    ],
)
def test_build_integrator(quartic, changes, kind):
    integrator = build_integrator(RunConfig(**changes), quartic)
    assert isinstance(integrator, kind)


def test_build_integrator_passes_stage_iteration(quartic):
    cfg = RunConfig(method="midpoint", irk_iteration="newton")
    integrator = build_integrator(cfg, quartic)
    assert isinstance(integrator, ImplicitRungeKutta)
    assert integrator.iteration == "newton"
    assert RunConfig(method="irk4").validate().irk_iteration == "fixed_point"


def test_extended_splitting_starts_embedded(quartic, quartic_ic):
    integrator = build_integrator(RunConfig(method="pihajoki"), quartic)
    state = integrator.initial_state(quartic_ic)
    assert isinstance(state, ExtendedPoint)
    assert integrator.phase_point(state) == quartic_ic


def test_run_totals():
    totals = RunTotals().add(SolverStats(3, 1e-12, True), 1e-13, 0.5)
    totals = totals.add(SolverStats(5, 1e-9, False), 1e-14, 1.0)
    assert (totals.steps, totals.iterations, totals.failures) == (2, 8, 1)
    assert totals.mean_iterations == 4.0
    assert totals.max_update_norm == 1e-9
    assert totals.max_defect == 1e-13
    assert totals.elapsed == 1.0


def test_run_totals_empty():
    assert RunTotals().mean_iterations is None
