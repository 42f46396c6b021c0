from __future__ import annotations

import numpy as np

from ..core.model import HamiltonianModel, Invariant
from ..core.phase import FloatArray, InvalidDimensionError, PhasePoint


def total_mass(q: FloatArray, p: FloatArray) -> float:
    """`I = sum(q_i^2 + p_i^2)`."""
    return float(q @ q + p @ p)


class NlsModel(HamiltonianModel):
    """Quartic lattice approximation of the cubic nonlinear Schrodinger equation.

    H(q, p) = 1/4 sum_i (q_i^2 + p_i^2)^2
              - sum_{i>=2} ( p_{i-1}^2 p_i^2 + q_{i-1}^2 q_i^2 - q_{i-1}^2 p_i^2
                             - p_{i-1}^2 q_i^2 + 4 p_{i-1} p_i q_{i-1} q_i )
    """

    name = "nls"
    MIN_SITES = 2

    def __init__(self, sites: int) -> None:
        if not isinstance(sites, int) or sites < self.MIN_SITES:
            raise InvalidDimensionError(
                f"The NLS lattice needs N >= {self.MIN_SITES} sites (got {sites})."
            )
        super().__init__(sites)

    @property
    def named_invariants(self) -> tuple[Invariant, ...]:
        return (Invariant("total_mass", total_mass),)

    def energy(self, q: FloatArray, p: FloatArray) -> float:
        on_site = 0.25 * np.sum((q**2 + p**2) ** 2)
        qk, ql, pk, pl = q[:-1], q[1:], p[:-1], p[1:]
        coupling = np.sum(
            pk**2 * pl**2
            + qk**2 * ql**2
            - qk**2 * pl**2
            - pk**2 * ql**2
            + 4.0 * pk * pl * qk * ql
        )
        return float(on_site - coupling)

    def grad_q(self, q: FloatArray, p: FloatArray) -> FloatArray:
        grad = (q**2 + p**2) * q
        qk, ql, pk, pl = q[:-1], q[1:], p[:-1], p[1:]
        # left and right neighbours of each bond
        grad[:-1] -= 2.0 * qk * ql**2 - 2.0 * qk * pl**2 + 4.0 * pk * pl * ql
        grad[1:] -= 2.0 * qk**2 * ql - 2.0 * pk**2 * ql + 4.0 * pk * pl * qk
        return grad

    def grad_p(self, q: FloatArray, p: FloatArray) -> FloatArray:
        grad = (q**2 + p**2) * p
        qk, ql, pk, pl = q[:-1], q[1:], p[:-1], p[1:]
        grad[:-1] -= 2.0 * pk * pl**2 - 2.0 * pk * ql**2 + 4.0 * pl * qk * ql
        grad[1:] -= 2.0 * pk**2 * pl - 2.0 * qk**2 * pl + 4.0 * pk * qk * ql
        return grad


def nls_model(sites: int) -> NlsModel:
    return NlsModel(sites)


def nls_initial_condition(sites: int) -> PhasePoint:
    """One excited site at `(3, 1)`, the rest at `(0.01, 0)`."""
    if sites < NlsModel.MIN_SITES:
        raise InvalidDimensionError(
            f"The NLS lattice needs N >= 2 sites (got {sites})."
        )
    q = np.full(sites, 0.01)
    q[0] = 3.0
    p = np.zeros(sites)
    p[0] = 1.0
    return PhasePoint(q, p)
