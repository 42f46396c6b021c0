import math

import numpy as np
import pytest

from semiexplicit.bench.oracle import reference_oracle
from semiexplicit.core import PhasePoint
from semiexplicit.solvers import (
    IRK_ITERATIONS,
    IrkTableau,
    SolverConfig,
    gauss_legendre4_tableau,
    irk_step,
    midpoint_tableau,
)
from semiexplicit.solvers.projection import NumericalFailureError
from semiexplicit.utils import numerical_jacobian, symplecticity_defect


@pytest.mark.parametrize("tableau", [midpoint_tableau(), gauss_legendre4_tableau()])
def test_tableaus_are_symplectic(tableau):
    assert tableau.symplecticity_residual() < 1e-15


@pytest.mark.parametrize("tableau", [midpoint_tableau(), gauss_legendre4_tableau()])
def test_tableaus_are_consistent(tableau):
    assert tableau.b.sum() == pytest.approx(1.0)
    assert np.allclose(tableau.a.sum(axis=1), tableau.c)


def test_tableau_metadata():
    assert (midpoint_tableau().stages, midpoint_tableau().order) == (1, 2)
    assert (gauss_legendre4_tableau().stages, gauss_legendre4_tableau().order) == (2, 4)
    assert gauss_legendre4_tableau().c[0] == pytest.approx(0.5 - math.sqrt(3) / 6)


def test_tableau_shape_mismatch():
    with pytest.raises(ValueError):
        IrkTableau([[0.5, 0.0]], [1.0], [0.5], 2)


@pytest.mark.parametrize("iteration", IRK_ITERATIONS)
def test_midpoint_on_oscillator_is_cayley(oscillator, tight_solver, iteration):
    dt = 0.1
    z = PhasePoint([1.0], [0.5])
    result, stats = irk_step(
        oscillator, midpoint_tableau(), dt, z, tight_solver, iteration
    )
    L = np.array([[0.0, 1.0], [-1.0, 0.0]])
    eye = np.eye(2)
    expected = np.linalg.solve(eye - 0.5 * dt * L, (eye + 0.5 * dt * L) @ z.flatten())
    assert np.allclose(result.flatten(), expected, rtol=0, atol=1e-12)
    assert stats.converged


@pytest.mark.parametrize("iteration", IRK_ITERATIONS)
@pytest.mark.parametrize("tableau", [midpoint_tableau(), gauss_legendre4_tableau()])
def test_quadratic_energy_is_conserved(oscillator, tableau, tight_solver, iteration):
    z = PhasePoint([1.0], [0.0])
    for _ in range(50):
        z, _ = irk_step(oscillator, tableau, 0.2, z, tight_solver, iteration)
    assert oscillator.energy(z.q, z.p) == pytest.approx(0.5, abs=1e-10)


def test_zero_step(quartic, quartic_ic, solver):
    z, stats = irk_step(quartic, gauss_legendre4_tableau(), 0.0, quartic_ic, solver)
    assert z == quartic_ic
    assert (stats.iterations, stats.final_update_norm, stats.converged) == (
        1,
        0.0,
        True,
    )


@pytest.mark.parametrize("tableau", [midpoint_tableau(), gauss_legendre4_tableau()])
def test_irk_step_is_symmetric(nls5, nls5_ic, tableau):
    cfg = SolverConfig(eps=1e-13)
    forward, _ = irk_step(nls5, tableau, 1e-2, nls5_ic, cfg)
    back, _ = irk_step(nls5, tableau, -1e-2, forward, cfg)
    assert np.allclose(back.flatten(), nls5_ic.flatten(), rtol=0, atol=1e-10)


def test_irk_step_is_symplectic(quartic, quartic_ic):
    cfg = SolverConfig(eps=1e-13)

    def step_map(v):
        z, _ = irk_step(
            quartic, gauss_legendre4_tableau(), 0.05, PhasePoint.from_flat(v), cfg
        )
        return z.flatten()

    assert symplecticity_defect(numerical_jacobian(step_map, [-3.0, 0.0])) < 1e-5


def test_gauss_legendre_beats_midpoint(quartic, quartic_ic, tight_solver):
    reference = reference_oracle(quartic, quartic_ic, 0.1, 1e-12).flatten()
    errors = []
    for tableau in (midpoint_tableau(), gauss_legendre4_tableau()):
        z = quartic_ic
        for _ in range(10):
            z, _ = irk_step(quartic, tableau, 0.01, z, tight_solver)
        errors.append(np.max(np.abs(z.flatten() - reference)))
    assert errors[1] < errors[0] / 100


def test_iteration_cap(nls5, nls5_ic):
    _, stats = irk_step(
        nls5, midpoint_tableau(), 1e-2, nls5_ic, SolverConfig(1e-15, 1)
    )
    assert stats.iterations == 1
    assert not stats.converged


def test_fixed_point_stages_stop_at_tolerance(oscillator):
    # stages are kept at the iterate the last increment was computed from
    dt = 0.1
    z = PhasePoint([1.0], [0.5])
    L = np.array([[0.0, 1.0], [-1.0, 0.0]])
    eye = np.eye(2)
    exact = np.linalg.solve(eye - 0.5 * dt * L, (eye + 0.5 * dt * L) @ z.flatten())
    loose = SolverConfig(eps=1e-6)
    result, stats = irk_step(oscillator, midpoint_tableau(), dt, z, loose)
    error = np.max(np.abs(result.flatten() - exact))
    assert stats.converged and stats.final_update_norm < 1e-6
    assert 1e-10 < error < 1e-5


def test_newton_solves_linear_stages_in_one_update(oscillator):
    z = PhasePoint([1.0], [0.5])
    _, stats = irk_step(
        oscillator, midpoint_tableau(), 0.1, z, SolverConfig(eps=1e-10), "newton"
    )
    assert stats.iterations == 2 and stats.converged


@pytest.mark.parametrize("tableau", [midpoint_tableau(), gauss_legendre4_tableau()])
def test_newton_needs_fewer_iterations(nls5, nls5_ic, tableau, tight_solver):
    fixed, fixed_stats = irk_step(nls5, tableau, 1e-2, nls5_ic, tight_solver)
    newton, newton_stats = irk_step(
        nls5, tableau, 1e-2, nls5_ic, tight_solver, "newton"
    )
    assert fixed_stats.converged and newton_stats.converged
    assert newton_stats.iterations < fixed_stats.iterations
    assert np.allclose(fixed.flatten(), newton.flatten(), rtol=0, atol=1e-10)


def test_unknown_stage_iteration(quartic, quartic_ic, solver):
    with pytest.raises(ValueError):
        irk_step(quartic, midpoint_tableau(), 0.1, quartic_ic, solver, "picard")


def test_non_finite_stages(quartic, solver):
    with np.errstate(all="ignore"), pytest.raises(NumericalFailureError):
        irk_step(quartic, midpoint_tableau(), 0.1, PhasePoint([1e200], [1e200]), solver)
