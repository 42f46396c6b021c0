__all__ = [
    "IRK_ITERATIONS",
    "SOLVER_IDS",
    "IrkTableau",
    "NumericalFailureError",
    "ProjectionDefectError",
    "SolverConfig",
    "SolverStats",
    "broyden",
    "gauss_legendre4_tableau",
    "irk_step",
    "midpoint_tableau",
    "project_step",
    "residual",
    "semiexplicit_step",
    "simplified_newton",
]

from .irk import (
    IRK_ITERATIONS,
    IrkTableau,
    gauss_legendre4_tableau,
    irk_step,
    midpoint_tableau,
)
from .projection import (
    SOLVER_IDS,
    NumericalFailureError,
    ProjectionDefectError,
    SolverConfig,
    SolverStats,
    broyden,
    project_step,
    residual,
    semiexplicit_step,
    simplified_newton,
)
