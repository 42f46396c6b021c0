__all__ = [
    "MODEL_IDS",
    "VORTEX_CONFIGS",
    "NlsModel",
    "QuarticModel",
    "UnknownModelError",
    "VortexConfig",
    "VortexModel",
    "build_model",
    "canonical_to_vortex",
    "nls_initial_condition",
    "nls_model",
    "quartic_exact_model",
    "quartic_initial_condition",
    "vortex_model",
    "vortex_to_canonical",
]

from ..core.model import HamiltonianModel
from ..core.phase import PhasePoint
from .nls import NlsModel, nls_initial_condition, nls_model
from .quartic import QuarticModel, quartic_exact_model, quartic_initial_condition
from .vortex import (
    VORTEX_CONFIGS,
    VortexConfig,
    VortexModel,
    canonical_to_vortex,
    vortex_model,
    vortex_to_canonical,
)

MODEL_IDS = ("quartic", "nls", "vortex")


class UnknownModelError(ValueError):
    """For when a model id is not one of `MODEL_IDS`."""

    pass


def build_model(
    model_id: str, nls_n: int = 5, vortex_ic: str = "standard"
) -> tuple[HamiltonianModel, PhasePoint]:
    """Build a shipped model along with its experiment initial condition.

    Args:
        model_id: One of `MODEL_IDS`.
        nls_n: Number of lattice sites for `"nls"`. Defaults to 5.
        vortex_ic: Vortex configuration name for `"vortex"`
            (`"standard"` or `"disparate"`). Defaults to "standard".

    Returns:
        The model and the canonical initial state.
    """
    match model_id:
        case "quartic":
            return quartic_exact_model(), quartic_initial_condition()
        case "nls":
            return nls_model(nls_n), nls_initial_condition(nls_n)
        case "vortex":
            try:
                cfg = VORTEX_CONFIGS[vortex_ic]
            except KeyError as err:
                raise UnknownModelError(
                    f"'{vortex_ic}' is not a vortex configuration "
                    + f"({', '.join(VORTEX_CONFIGS)})."
                ) from err
            return vortex_model(cfg), vortex_to_canonical(cfg)
    raise UnknownModelError(
        f"'{model_id}' is not a valid model ({', '.join(MODEL_IDS)})."
    )
