from __future__ import annotations

from ..core.integrator import Integrator, State, StepResult
from ..core.model import HamiltonianModel
from ..core.phase import ExtendedPoint, PhasePoint, defect_norm, embed
from ..extended.composition import compose, fused_strang
from ..extended.flows import BaseStep, strang, tao
from ..solvers.irk import (
    IrkTableau,
    gauss_legendre4_tableau,
    irk_step,
    midpoint_tableau,
)
from ..solvers.projection import NumericalFailureError, SolverConfig, project_step
from .config import RunConfig


class ExtendedSplitting(Integrator):
    """Explicit splitting in the doubled phase space, without projection.

    The state is the full `(q, x, p, y)` point and the copies drift apart.
    """

    tracks_defect = True

    def __init__(self, model: HamiltonianModel, base_step: BaseStep, name: str) -> None:
        super().__init__(model)
        self.base_step = base_step
        self.name = name

    def initial_state(self, z0: PhasePoint) -> ExtendedPoint:
        self.model.check_state(z0)
        return embed(z0)

    def step(self, state: State, dt: float) -> StepResult:
        if not isinstance(state, ExtendedPoint):
            state = embed(state)
        new = self.base_step(dt, state)
        if not new.is_finite:
            raise NumericalFailureError(f"{self.name} step produced non-finite values.")
        return StepResult(new, defect=defect_norm(new))


class Semiexplicit(Integrator):
    """Extended-phase-space splitting with symmetric projection."""

    name = "semiexplicit"
    has_solver = True
    tracks_defect = True

    def __init__(
        self, model: HamiltonianModel, base_step: BaseStep, solver: SolverConfig
    ) -> None:
        super().__init__(model)
        self.base_step = base_step
        self.solver = solver

    def step(self, state: State, dt: float) -> StepResult:
        z = self.phase_point(state)
        result = project_step(self.model, self.base_step, dt, z, self.solver)
        return StepResult(result.state, result.stats, result.defect_norm)


class ImplicitRungeKutta(Integrator):
    """Gauss-Legendre collocation on the original phase space."""

    has_solver = True

    def __init__(
        self,
        model: HamiltonianModel,
        tableau: IrkTableau,
        solver: SolverConfig,
        iteration: str = "fixed_point",
    ) -> None:
        super().__init__(model)
        self.tableau = tableau
        self.solver = solver
        self.iteration = iteration
        self.name = tableau.name

    def step(self, state: State, dt: float) -> StepResult:
        z, stats = irk_step(
            self.model,
            self.tableau,
            dt,
            self.phase_point(state),
            self.solver,
            self.iteration,
        )
        return StepResult(z, stats)


def build_base_step(cfg: RunConfig, model: HamiltonianModel) -> BaseStep:
    """Base step of an extended method, composed up to `cfg.order`."""
    scheme = cfg.scheme()
    if cfg.method == "tao":
        assert cfg.omega is not None
        return compose(tao(model, cfg.omega), scheme)
    if cfg.fuse:
        return fused_strang(model, scheme)
    return compose(strang(model), scheme)


def build_integrator(cfg: RunConfig, model: HamiltonianModel) -> Integrator:
    """Assemble the integrator named by `cfg.method` for `model`."""
    match cfg.method:
        case "pihajoki" | "tao":
            return ExtendedSplitting(model, build_base_step(cfg, model), cfg.label)
        case "semiexplicit":
            return Semiexplicit(model, build_base_step(cfg, model), cfg.solver_config())
        case "midpoint":
            return ImplicitRungeKutta(
                model, midpoint_tableau(), cfg.solver_config(), cfg.irk_iteration
            )
        case "irk4":
            return ImplicitRungeKutta(
                model,
                gauss_legendre4_tableau(),
                cfg.solver_config(),
                cfg.irk_iteration,
            )
    raise ValueError(f"'{cfg.method}' is not a valid method.")
