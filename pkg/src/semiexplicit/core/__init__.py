__all__ = [
    "DefectVector",
    "ExtendedPoint",
    "Formatter",
    "HamiltonianModel",
    "Integrator",
    "InvalidDimensionError",
    "Invariant",
    "PhasePoint",
    "StepResult",
    "average_restrict",
    "check_gradients",
    "defect",
    "defect_norm",
    "embed",
    "restrict",
    "shift",
]

from .formatter import Formatter
from .integrator import Integrator, StepResult
from .model import HamiltonianModel, Invariant, check_gradients
from .phase import (
    DefectVector,
    ExtendedPoint,
    InvalidDimensionError,
    PhasePoint,
    average_restrict,
    defect,
    defect_norm,
    embed,
    restrict,
    shift,
)
