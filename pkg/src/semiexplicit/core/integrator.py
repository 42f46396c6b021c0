from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeAlias

from .model import HamiltonianModel
from .phase import ExtendedPoint, PhasePoint, restrict

if TYPE_CHECKING:  # pragma: no cover
    from ..solvers.projection import SolverStats


State: TypeAlias = PhasePoint | ExtendedPoint


@dataclass(frozen=True, slots=True)
class StepResult:
    """Outcome of a single step.

    `stats` is only set by methods that run an iterative solver and `defect`
    only by methods working in the doubled phase space.
    """

    state: State
    stats: SolverStats | None = None
    defect: float | None = None


class Integrator(ABC):
    """Base class for a one-step method advancing a `HamiltonianModel`.

    To implement your own `Integrator`, subclass this class.

    Example:
        ```python
        class ExplicitEuler(Integrator):
            def step(self, state, dt) -> StepResult:
                z = PhasePoint.from_flat(
                    state.flatten() + dt * self.model.vector_field(state.flatten())
                )
                return StepResult(z)
        ```
    """

    name: str = "integrator"
    has_solver: bool = False
    tracks_defect: bool = False

    def __init__(self, model: HamiltonianModel) -> None:
        self.model = model

    def initial_state(self, z0: PhasePoint) -> State:
        """State the method starts from given the canonical initial condition."""
        self.model.check_state(z0)
        return z0

    @abstractmethod
    def step(self, state: State, dt: float) -> StepResult:
        """Advance `state` by `dt`."""

    @staticmethod
    def phase_point(state: State) -> PhasePoint:
        """Canonical `(q, p)` reported for `state`; the raw pair for extended
        states."""
        if isinstance(state, ExtendedPoint):
            return restrict(state)
        return state

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(model={self.model!r})"
