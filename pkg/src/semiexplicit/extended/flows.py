"""Exact split flows of the doubled system and the explicit base steps built
from them.

With `H_A(q, x, p, y) = H(q, y)` and `H_B(q, x, p, y) = H(x, p)` each flow
freezes the arguments its gradients depend on, so both are solved in closed
form. `H_C = omega/2 (|x - q|^2 + |y - p|^2)` rotates the copy differences.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from functools import partial
from typing import TypeAlias

from ..core.model import HamiltonianModel
from ..core.phase import ExtendedPoint

BaseStep: TypeAlias = Callable[[float, ExtendedPoint], ExtendedPoint]


def flow_a(model: HamiltonianModel, t: float, zeta: ExtendedPoint) -> ExtendedPoint:
    """Flow of `H(q, y)` for time `t`; `q` and `y` stay fixed."""
    if t == 0.0:
        return zeta
    return ExtendedPoint(
        zeta.q,
        zeta.x + t * model.grad_p(zeta.q, zeta.y),
        zeta.p - t * model.grad_q(zeta.q, zeta.y),
        zeta.y,
    )


def flow_b(model: HamiltonianModel, t: float, zeta: ExtendedPoint) -> ExtendedPoint:
    """Flow of `H(x, p)` for time `t`; `x` and `p` stay fixed."""
    if t == 0.0:
        return zeta
    return ExtendedPoint(
        zeta.q + t * model.grad_p(zeta.x, zeta.p),
        zeta.x,
        zeta.p,
        zeta.y - t * model.grad_q(zeta.x, zeta.p),
    )


def flow_c(omega: float, t: float, zeta: ExtendedPoint) -> ExtendedPoint:
    """Flow of the coupling `H_C` for time `t`.

    The sums `q + x` and `p + y` are conserved while the differences
    `(u, v) = (q - x, p - y)` rotate by the angle `2 omega t`.
    """
    theta = 2.0 * omega * t
    if theta == 0.0:
        return zeta
    cos, sin = math.cos(theta), math.sin(theta)
    sum_q, sum_p = zeta.q + zeta.x, zeta.p + zeta.y
    u, v = zeta.q - zeta.x, zeta.p - zeta.y
    u_new = cos * u + sin * v
    v_new = -sin * u + cos * v
    return ExtendedPoint(
        0.5 * (sum_q + u_new),
        0.5 * (sum_q - u_new),
        0.5 * (sum_p + v_new),
        0.5 * (sum_p - v_new),
    )


def strang_step(
    model: HamiltonianModel, dt: float, zeta: ExtendedPoint
) -> ExtendedPoint:
    """Second-order symmetric splitting `A(dt/2) B(dt) A(dt/2)`."""
    half = 0.5 * dt
    zeta = flow_a(model, half, zeta)
    zeta = flow_b(model, dt, zeta)
    return flow_a(model, half, zeta)


def tao_step(
    model: HamiltonianModel, omega: float, dt: float, zeta: ExtendedPoint
) -> ExtendedPoint:
    """Second-order symmetric splitting `A(dt/2) B(dt/2) C(dt) B(dt/2) A(dt/2)`."""
    half = 0.5 * dt
    zeta = flow_a(model, half, zeta)
    zeta = flow_b(model, half, zeta)
    zeta = flow_c(omega, dt, zeta)
    zeta = flow_b(model, half, zeta)
    return flow_a(model, half, zeta)


def strang(model: HamiltonianModel) -> BaseStep:
    """Bind `strang_step` to `model`."""
    return partial(strang_step, model)


def tao(model: HamiltonianModel, omega: float) -> BaseStep:
    """Bind `tao_step` to `model` and the coupling frequency `omega`."""
    return partial(tao_step, model, omega)
