from collections import deque

import pytest

from semiexplicit.bench import (
    RunConfig,
    invariant_drift_report,
    iteration_report,
    order_study,
    run_trajectory,
)

pytestmark = pytest.mark.slow

COMPOSED = {
    2: {"composition": "none", "order": 2},
    4: {"composition": "triple_jump", "order": 4},
    6: {"composition": "triple_jump", "order": 6},
}


def mean_iterations(cfg):
    report = iteration_report(run_trajectory(cfg))
    assert report.failures == 0
    return report.mean_iterations


def last_record(cfg):
    return deque(run_trajectory(cfg), maxlen=1)[0]


@pytest.mark.parametrize("order, expected", [(2, 3.37), (4, 1.94), (6, 1.00)])
def test_lattice_iterations_at_small_step(order, expected):
    cfg = RunConfig(model="nls", dt=1e-3, T=10.0, eps=1e-10, **COMPOSED[order])
    assert mean_iterations(cfg) == pytest.approx(expected, abs=1.0)


@pytest.mark.parametrize("method, expected", [("midpoint", 5.99), ("irk4", 5.21)])
def test_collocation_iterations_at_small_step(method, expected):
    cfg = RunConfig(model="nls", method=method, dt=1e-3, T=10.0, eps=1e-10)
    assert mean_iterations(cfg) == pytest.approx(expected, abs=1.0)


def test_collocation_iterations_grow_with_tolerance():
    loose = RunConfig(model="nls", method="midpoint", dt=1e-2, T=10.0, eps=1e-10)
    tight = loose.replace(eps=1e-13)
    assert mean_iterations(tight) > mean_iterations(loose)


@pytest.mark.parametrize("order, expected", [(2, 2.0), (4, 1.0), (6, 1.0)])
def test_vortex_iterations(order, expected):
    cfg = RunConfig(model="vortex", dt=0.1, T=100.0, eps=1e-10, **COMPOSED[order])
    assert mean_iterations(cfg) == pytest.approx(expected, abs=1.0)


@pytest.mark.parametrize(
    "solver, order, expected",
    [
        ("simplified_newton", 2, 11.55),
        ("simplified_newton", 4, 9.88),
        ("simplified_newton", 6, 8.92),
        ("broyden", 2, 8.88),
        ("broyden", 4, 7.85),
        ("broyden", 6, 7.06),
    ],
)
def test_lattice_iterations_at_tight_tolerance(solver, order, expected):
    cfg = RunConfig(
        model="nls", dt=1e-2, T=100.0, eps=1e-13, solver=solver, **COMPOSED[order]
    )
    assert mean_iterations(cfg) == pytest.approx(expected, abs=1.0)


def test_semiexplicit_beats_coupled_splitting():
    dts = [0.1, 0.05, 0.02, 0.01]
    for order in (2, 4, 6):
        semiexplicit = RunConfig(T=100.0, eps=1e-13, **COMPOSED[order])
        tao = semiexplicit.replace(method="tao", omega=20.0)
        study = order_study([semiexplicit, tao], dts)
        for ours, theirs in zip(
            study.errors(semiexplicit.label), study.errors(tao.label)
        ):
            assert ours <= theirs


@pytest.mark.parametrize(
    "order, expected", [(2, 0.025191), (4, 0.016279), (6, 0.006048)]
)
def test_coupled_splitting_defect(order, expected):
    cfg = RunConfig(
        model="nls",
        method="tao",
        omega=100.0,
        dt=1e-2,
        T=1e4,
        stride=1000,
        **COMPOSED[order],
    )
    max_defect = last_record(cfg).totals.max_defect
    assert expected / 3 < max_defect < 3 * expected


def test_semiexplicit_keeps_mass_where_midpoint_drifts():
    semiexplicit = RunConfig(model="nls", dt=1e-3, T=100.0, eps=1e-10, stride=100)
    midpoint = semiexplicit.replace(method="midpoint")
    ours = invariant_drift_report(run_trajectory(semiexplicit))["total_mass"]
    theirs = invariant_drift_report(run_trajectory(midpoint))["total_mass"]
    assert abs(ours.slope) < abs(theirs.slope)
    assert ours.max_abs_error < theirs.max_abs_error


def test_semiexplicit_mass_drift_at_tight_tolerance():
    cfg = RunConfig(model="nls", dt=1e-3, T=1e3, eps=1e-13, stride=1000)
    drift = invariant_drift_report(run_trajectory(cfg))["total_mass"]
    assert abs(drift.slope) <= 1e-13


def test_vortex_invariants_do_not_drift():
    cfg = RunConfig(model="vortex", dt=0.1, T=1e3, eps=1e-13, stride=10)
    report = invariant_drift_report(run_trajectory(cfg))
    for name in ("Q", "P", "I_angular"):
        assert abs(report[name].slope) < 1e-12


def test_broyden_converges_on_disparate_vortices():
    simplified = RunConfig(
        model="vortex", vortex_ic="disparate", dt=1e-2, T=1e3, eps=1e-13
    )
    for order in (2, 4):
        base = simplified.replace(**COMPOSED[order])
        broyden = iteration_report(run_trajectory(base.replace(solver="broyden")))
        newton = iteration_report(run_trajectory(base))
        assert broyden.failures == 0
        assert broyden.mean_iterations <= newton.mean_iterations
