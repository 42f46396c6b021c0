from ..core.model import HamiltonianModel
from ..core.phase import FloatArray, PhasePoint


class QuarticModel(HamiltonianModel):
    """`H(q, p) = (q^2 + 1)(p^2 + 1) / 2`, an exactly solvable non-separable
    system on `T*R`."""

    name = "quartic"

    def __init__(self) -> None:
        super().__init__(1)

    def energy(self, q: FloatArray, p: FloatArray) -> float:
        return float(0.5 * (q[0] ** 2 + 1.0) * (p[0] ** 2 + 1.0))

    def grad_q(self, q: FloatArray, p: FloatArray) -> FloatArray:
        return q * (p**2 + 1.0)

    def grad_p(self, q: FloatArray, p: FloatArray) -> FloatArray:
        return p * (q**2 + 1.0)


def quartic_exact_model() -> QuarticModel:
    return QuarticModel()


def quartic_initial_condition() -> PhasePoint:
    return PhasePoint([-3.0], [0.0])
