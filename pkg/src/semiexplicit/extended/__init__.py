__all__ = [
    "SCHEME_IDS",
    "BaseStep",
    "CompositionScheme",
    "InvalidOrderError",
    "compose",
    "flow_a",
    "flow_b",
    "flow_c",
    "fused_strang",
    "scheme_for",
    "strang",
    "strang_step",
    "suzuki",
    "tao",
    "tao_step",
    "triple_jump",
    "yoshida6",
]

from .composition import (
    SCHEME_IDS,
    CompositionScheme,
    InvalidOrderError,
    compose,
    fused_strang,
    scheme_for,
    suzuki,
    triple_jump,
    yoshida6,
)
from .flows import (
    BaseStep,
    flow_a,
    flow_b,
    flow_c,
    strang,
    strang_step,
    tao,
    tao_step,
)
