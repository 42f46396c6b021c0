"""
Semiexplicit
------------
Symplectic integration of non-separable Hamiltonian systems in an extended
phase space with symmetric projection, plus the benchmark harness comparing
it against explicit splittings and implicit Runge-Kutta methods.
------------
:license: MIT, see LICENSE for more details.
"""

__all__ = [
    "__version__",
    "ExtendedPoint",
    "HamiltonianModel",
    "PhasePoint",
    "RunConfig",
    "SolverConfig",
    "run_trajectory",
    "semiexplicit_step",
]

from rich.traceback import install

from .bench import RunConfig, run_trajectory
from .core import ExtendedPoint, HamiltonianModel, PhasePoint
from .solvers import SolverConfig, semiexplicit_step

install(show_locals=True)


def __getattr__(name: str) -> str:
    """Lazily get the version when needed."""

    if name == "__version__":
        from importlib.metadata import version

        return version("semiexplicit-integrator")
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
