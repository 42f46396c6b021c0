from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from .phase import ExtendedPoint, FloatArray, InvalidDimensionError, PhasePoint


class Invariant(NamedTuple):
    """A named conserved quantity evaluated on canonical `(q, p)`."""

    name: str
    func: Callable[[FloatArray, FloatArray], float]


class HamiltonianModel(ABC):
    """Base class for a canonical Hamiltonian system on `T*R^d`.

    To implement your own model, subclass this class and provide the energy
    together with both analytic partial gradients.

    Example:
        ```python
        class Oscillator(HamiltonianModel):
            def energy(self, q, p) -> float:
                return 0.5 * float(q @ q + p @ p)

            def grad_q(self, q, p):
                return q

            def grad_p(self, q, p):
                return p
        ```
    """

    name: str = "model"

    def __init__(self, dim: int) -> None:
        if not isinstance(dim, int) or dim < 1:
            raise InvalidDimensionError(f"Model dimension must be >= 1 (got {dim}).")
        self._dim = dim

    @property
    def dim(self) -> int:
        """Dimension `d` of the configuration space."""
        return self._dim

    @property
    def named_invariants(self) -> tuple[Invariant, ...]:
        """Conserved quantities other than the Hamiltonian itself."""
        return ()

    @abstractmethod
    def energy(self, q: FloatArray, p: FloatArray) -> float:
        """Hamiltonian `H(q, p)`."""

    @abstractmethod
    def grad_q(self, q: FloatArray, p: FloatArray) -> FloatArray:
        """Partial gradient `D1 H(q, p)`."""

    @abstractmethod
    def grad_p(self, q: FloatArray, p: FloatArray) -> FloatArray:
        """Partial gradient `D2 H(q, p)`."""

    def vector_field(self, z: FloatArray) -> FloatArray:
        """Canonical field `(D2 H, -D1 H)` on the flat `(q, p)` vector."""
        q, p = z[: self.dim], z[self.dim :]
        return np.concatenate((self.grad_p(q, p), -self.grad_q(q, p)))

    def extended_vector_field(self, zeta: FloatArray, omega: float = 0.0) -> FloatArray:
        """Field of the doubled system on the flat `(q, x, p, y)` vector.

        With `omega != 0` the copies are coupled through the harmonic term
        `omega / 2 (|x - q|^2 + |y - p|^2)`.
        """
        d = self.dim
        q, x, p, y = zeta[:d], zeta[d : 2 * d], zeta[2 * d : 3 * d], zeta[3 * d :]
        dq = self.grad_p(x, p) + omega * (p - y)
        dx = self.grad_p(q, y) + omega * (y - p)
        dp = -self.grad_q(q, y) - omega * (q - x)
        dy = -self.grad_q(x, p) - omega * (x - q)
        return np.concatenate((dq, dx, dp, dy))

    def invariants(self, z: PhasePoint) -> dict[str, float]:
        """The Hamiltonian (as `"H"`) followed by every named invariant."""
        values = {"H": float(self.energy(z.q, z.p))}
        for invariant in self.named_invariants:
            values[invariant.name] = float(invariant.func(z.q, z.p))
        return values

    def check_state(self, z: PhasePoint | ExtendedPoint) -> None:
        if z.dim != self.dim:
            raise InvalidDimensionError(
                f"State of dimension {z.dim} given to a model of dimension {self.dim}."
            )

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim})"


def check_gradients(model: HamiltonianModel, z: PhasePoint, h: float = 1e-6) -> float:
    """Compare the analytic gradients against central differences of the energy.

    Args:
        model: Model under test.
        z: State to evaluate at.
        h: Finite-difference step. Must be positive.

    Returns:
        Max over all `2d` components of `|analytic - numeric| / (1 + |analytic|)`.
    """
    if h <= 0:
        raise ValueError("Finite-difference step must be positive.")
    model.check_state(z)
    analytic = np.concatenate((model.grad_q(z.q, z.p), model.grad_p(z.q, z.p)))
    flat = z.flatten()
    d = model.dim
    numeric = np.empty_like(flat)
    for i in range(flat.size):
        forward, backward = flat.copy(), flat.copy()
        forward[i] += h
        backward[i] -= h
        numeric[i] = (
            model.energy(forward[:d], forward[d:])
            - model.energy(backward[:d], backward[d:])
        ) / (2.0 * h)
    return float(np.max(np.abs(analytic - numeric) / (1.0 + np.abs(analytic))))
