import numpy as np
import pytest

from semiexplicit.bench import RunConfig
from semiexplicit.core import HamiltonianModel, PhasePoint
from semiexplicit.models import (
    nls_model,
    quartic_exact_model,
    vortex_model,
)
from semiexplicit.models.nls import nls_initial_condition
from semiexplicit.models.vortex import STANDARD_VORTICES, vortex_to_canonical
from semiexplicit.solvers import SolverConfig


class QpModel(HamiltonianModel):
    """`H = q p`, so `D1 H = p` and `D2 H = q`."""

    name = "qp"

    def __init__(self, dim: int = 1) -> None:
        super().__init__(dim)

    def energy(self, q, p) -> float:
        return float(q @ p)

    def grad_q(self, q, p):
        return p.copy()

    def grad_p(self, q, p):
        return q.copy()


class OscillatorModel(HamiltonianModel):
    """`H = (q^2 + p^2) / 2`."""

    name = "oscillator"

    def __init__(self, dim: int = 1) -> None:
        super().__init__(dim)

    def energy(self, q, p) -> float:
        return 0.5 * float(q @ q + p @ p)

    def grad_q(self, q, p):
        return q.copy()

    def grad_p(self, q, p):
        return p.copy()


@pytest.fixture
def samples():
    return 10


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def qp_model():
    return QpModel()


@pytest.fixture
def oscillator():
    return OscillatorModel()


@pytest.fixture
def quartic():
    return quartic_exact_model()


@pytest.fixture
def quartic_ic():
    return PhasePoint([-3.0], [0.0])


@pytest.fixture
def nls5():
    return nls_model(5)


@pytest.fixture
def nls5_ic():
    return nls_initial_condition(5)


@pytest.fixture
def vortices():
    return vortex_model(STANDARD_VORTICES)


@pytest.fixture
def vortices_ic():
    return vortex_to_canonical(STANDARD_VORTICES)


@pytest.fixture
def tight_solver():
    return SolverConfig(eps=1e-13)


@pytest.fixture
def solver():
    return SolverConfig(eps=1e-10)


@pytest.fixture
def quartic_run():
    return RunConfig(model="quartic", method="semiexplicit", dt=0.01, T=1.0)
