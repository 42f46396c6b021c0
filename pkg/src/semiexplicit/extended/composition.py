from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from ..core.model import HamiltonianModel
from ..core.phase import ExtendedPoint
from .flows import BaseStep, flow_a, flow_b

SCHEME_IDS = ("none", "triple_jump", "suzuki", "yoshida6")

# Yoshida's sixth-order solution A; the middle weight is fixed by consistency.
YOSHIDA6_W1 = -1.177679984178871007
YOSHIDA6_W2 = 0.235573213359358134
YOSHIDA6_W3 = 0.784513610477557264
YOSHIDA6_W0 = 1.0 - 2.0 * (YOSHIDA6_W1 + YOSHIDA6_W2 + YOSHIDA6_W3)


class InvalidOrderError(ValueError):
    """For when a composition order is odd or below 4."""

    pass


@dataclass(frozen=True, slots=True)
class CompositionScheme:
    """A flat, palindromic list of stage coefficients and the order it reaches
    from a symmetric second-order base step."""

    coefficients: tuple[float, ...]
    claimed_order: int
    name: str = "none"

    @property
    def stages(self) -> int:
        return len(self.coefficients)

    @property
    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    @property
    def consistency_error(self) -> float:
        """`|sum(gamma) - 1|`."""
        return abs(sum(self.coefficients) - 1.0)


IDENTITY_SCHEME = CompositionScheme((1.0,), 2, "none")


def _validate_order(order: int) -> None:
    if not isinstance(order, int) or order < 4 or order % 2:
        raise InvalidOrderError(
            f"Composition order must be even and >= 4 (got {order})."
        )


def _recursive_scheme(order: int, branches: int, name: str) -> CompositionScheme:
    """Flatten the recursive `branches`-stage construction up to `order`.

    Stage `n` composes the flattened order `n - 2` scheme `branches` times at
    the scaled steps `gamma_k dt`.
    """
    _validate_order(order)
    coefficients: list[float] = [1.0]
    for n in range(4, order + 1, 2):
        base = branches - 1
        power = base ** (1.0 / (n - 1))
        outer = 1.0 / (base - power)
        middle = -power * outer
        gammas = [outer] * (branches // 2) + [middle] + [outer] * (branches // 2)
        coefficients = [g * c for g in gammas for c in coefficients]
    return CompositionScheme(tuple(coefficients), order, name)


def triple_jump(order: int) -> CompositionScheme:
    """Recursive symmetric Triple Jump, `3^((order - 2) / 2)` stages."""
    return _recursive_scheme(order, 3, "triple_jump")


def suzuki(order: int) -> CompositionScheme:
    """Recursive Suzuki fractal, `5^((order - 2) / 2)` stages."""
    return _recursive_scheme(order, 5, "suzuki")


def yoshida6() -> CompositionScheme:
    """Yoshida's seven-stage sixth-order composition."""
    w = (YOSHIDA6_W3, YOSHIDA6_W2, YOSHIDA6_W1, YOSHIDA6_W0)
    return CompositionScheme(w + w[-2::-1], 6, "yoshida6")


def scheme_for(name: str, order: int = 2) -> CompositionScheme:
    """Look up a scheme by its harness id."""
    match name:
        case "none":
            if order != 2:
                raise InvalidOrderError("Without composition the order is 2.")
            return IDENTITY_SCHEME
        case "triple_jump":
            return triple_jump(order)
        case "suzuki":
            return suzuki(order)
        case "yoshida6":
            if order != 6:
                raise InvalidOrderError("Yoshida's composition is of order 6.")
            return yoshida6()
    raise ValueError(
        f"'{name}' is not a valid composition ({', '.join(SCHEME_IDS)})."
    )


def compose(base_step: BaseStep, scheme: CompositionScheme) -> BaseStep:
    """Return the step `dt -> base(g_k dt) o ... o base(g_1 dt)`."""
    coefficients = scheme.coefficients
    if coefficients == (1.0,):
        return base_step

    def composed(dt: float, zeta: ExtendedPoint) -> ExtendedPoint:
        for gamma in coefficients:
            zeta = base_step(gamma * dt, zeta)
        return zeta

    return composed


def _fused_half_steps(coefficients: Sequence[float]) -> Iterable[tuple[str, float]]:
    """Yield the `(flow, fraction)` sequence of a composed Strang step with
    adjacent A half-steps merged."""
    pending = 0.5 * coefficients[0]
    for i, gamma in enumerate(coefficients):
        yield "A", pending
        yield "B", gamma
        nxt = coefficients[i + 1] if i + 1 < len(coefficients) else 0.0
        pending = 0.5 * (gamma + nxt)
    yield "A", pending


def fused_strang(model: HamiltonianModel, scheme: CompositionScheme) -> BaseStep:
    """Composed Strang step with the trailing A half-flow of each stage merged
    into the leading one of the next."""
    plan = tuple(_fused_half_steps(scheme.coefficients))

    def composed(dt: float, zeta: ExtendedPoint) -> ExtendedPoint:
        for flow, fraction in plan:
            if flow == "A":
                zeta = flow_a(model, fraction * dt, zeta)
            else:
                zeta = flow_b(model, fraction * dt, zeta)
        return zeta

    return composed
