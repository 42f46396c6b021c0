"""Point vortices in the plane as a canonical Hamiltonian system.

Vortex centres `(x_i, y_i)` with circulations `G_i` move under

    H = -1/(4 pi) sum_{i != j} G_i G_j log |z_i - z_j|

(every pair counted twice). The canonical coordinates are

    q_i = sqrt|G_i| x_i,    p_i = sqrt|G_i| sgn(G_i) y_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..core.model import HamiltonianModel, Invariant
from ..core.phase import FloatArray, InvalidDimensionError, PhasePoint, as_vector

COLLISION_DISTANCE = 1e-12


class InvalidCirculationError(ValueError):
    """For when a vortex has zero circulation."""

    def __init__(self, message="Vortex circulations must all be nonzero."):
        self.message = message
        super().__init__(self.message)


class SingularConfigurationError(ValueError):
    """For when two vortex centres coincide in the initial configuration."""

    pass


class NearCollisionError(ArithmeticError):
    """For when two vortices come closer than `COLLISION_DISTANCE`."""

    pass


def _check_circulations(circulations: FloatArray) -> None:
    if np.any(circulations == 0.0):
        raise InvalidCirculationError()


@dataclass(frozen=True, slots=True)
class VortexConfig:
    """Vortex centres and circulations."""

    x: FloatArray
    y: FloatArray
    circulations: FloatArray

    def __init__(self, x: ArrayLike, y: ArrayLike, circulations: ArrayLike) -> None:
        xs, ys, gammas = as_vector(x), as_vector(y), as_vector(circulations)
        if xs.size < 1 or xs.shape != ys.shape or xs.shape != gammas.shape:
            raise InvalidDimensionError("x, y and circulations must share a length.")
        _check_circulations(gammas)
        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        distances = np.hypot(dx, dy)[np.triu_indices(xs.size, k=1)]
        if distances.size and np.min(distances) <= 0.0:
            raise SingularConfigurationError("Two vortex centres coincide.")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)
        object.__setattr__(self, "circulations", gammas)

    @property
    def count(self) -> int:
        return self.x.size


def _scales(circulations: FloatArray) -> tuple[FloatArray, FloatArray]:
    """`sqrt|G|` and `sgn(G)` with `sgn(0)` never reached."""
    return np.sqrt(np.abs(circulations)), np.where(circulations > 0.0, 1.0, -1.0)


def vortex_to_canonical(cfg: VortexConfig) -> PhasePoint:
    root, sign = _scales(cfg.circulations)
    return PhasePoint(root * cfg.x, root * sign * cfg.y)


def canonical_to_vortex(
    z: PhasePoint, circulations: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    gammas = as_vector(circulations)
    if gammas.shape != z.q.shape:
        raise InvalidDimensionError("One circulation per canonical pair is required.")
    _check_circulations(gammas)
    root, sign = _scales(gammas)
    return z.q / root, z.p / (root * sign)


class VortexModel(HamiltonianModel):
    """The N-vortex interaction energy in canonical coordinates.

    Invariants are the linear impulse `(Q, P)` and the angular impulse
    `I_angular`, all composed with the inverse coordinate transform.
    """

    name = "vortex"

    def __init__(self, cfg: VortexConfig) -> None:
        super().__init__(cfg.count)
        self.circulations = cfg.circulations.copy()
        self._root, self._sign = _scales(self.circulations)
        self._pairs = np.outer(self.circulations, self.circulations)
        np.fill_diagonal(self._pairs, 0.0)

    @property
    def named_invariants(self) -> tuple[Invariant, ...]:
        return (
            Invariant("Q", self.linear_impulse_x),
            Invariant("P", self.linear_impulse_y),
            Invariant("I_angular", self.angular_impulse),
        )

    def positions(self, q: FloatArray, p: FloatArray) -> tuple[FloatArray, FloatArray]:
        return q / self._root, p / (self._root * self._sign)

    def _separations(
        self, q: FloatArray, p: FloatArray
    ) -> tuple[FloatArray, FloatArray, FloatArray]:
        x, y = self.positions(q, p)
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        r2 = dx**2 + dy**2
        np.fill_diagonal(r2, 1.0)
        if np.min(r2) < COLLISION_DISTANCE**2:
            i, j = np.unravel_index(np.argmin(r2), r2.shape)
            raise NearCollisionError(
                f"Vortices {i} and {j} are closer than {COLLISION_DISTANCE:g}."
            )
        return dx, dy, r2

    def energy(self, q: FloatArray, p: FloatArray) -> float:
        _, _, r2 = self._separations(q, p)
        # log|z| = log(r^2) / 2; diagonal of r2 is 1 so it drops out
        return float(-np.sum(self._pairs * np.log(r2)) / (8.0 * math.pi))

    def _position_gradients(
        self, q: FloatArray, p: FloatArray
    ) -> tuple[FloatArray, FloatArray]:
        dx, dy, r2 = self._separations(q, p)
        weights = self._pairs / r2
        scale = -1.0 / (2.0 * math.pi)
        return (
            scale * np.sum(weights * dx, axis=1),
            scale * np.sum(weights * dy, axis=1),
        )

    def grad_q(self, q: FloatArray, p: FloatArray) -> FloatArray:
        dh_dx, _ = self._position_gradients(q, p)
        return dh_dx / self._root

    def grad_p(self, q: FloatArray, p: FloatArray) -> FloatArray:
        _, dh_dy = self._position_gradients(q, p)
        return dh_dy / (self._root * self._sign)

    def linear_impulse_x(self, q: FloatArray, p: FloatArray) -> float:
        x, _ = self.positions(q, p)
        return float(self.circulations @ x)

    def linear_impulse_y(self, q: FloatArray, p: FloatArray) -> float:
        _, y = self.positions(q, p)
        return float(self.circulations @ y)

    def angular_impulse(self, q: FloatArray, p: FloatArray) -> float:
        x, y = self.positions(q, p)
        return float(self.circulations @ (x**2 + y**2))


def vortex_model(cfg: VortexConfig) -> VortexModel:
    return VortexModel(cfg)


STANDARD_VORTICES = VortexConfig(
    x=[3, -10, 6, 9, 0, 7, -8, 5, 9, 7],
    y=[-5, -6, 0, -2, 0, 10, 2, 9, 0, -1],
    circulations=np.array([-5, 3, 6, 7, -2, -8, -9, -3, 7, -6]) / 10.0,
)

DISPARATE_VORTICES = VortexConfig(
    x=[0.5, 3.5, -1.5, -0.5, -4.5, -3.5, 1.5, -2, 4, -4],
    y=[5, 0.5, 2, 5, -2, -1, -0.5, 3, 3.5, -4],
    circulations=[-14.8, -18.8, 17.6, -8, -8.2, -6.8, -1.4, 6, -11, 13.8],
)

VORTEX_CONFIGS: dict[str, VortexConfig] = {
    "standard": STANDARD_VORTICES,
    "disparate": DISPARATE_VORTICES,
}
