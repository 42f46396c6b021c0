__all__ = [
    "METHOD_IDS",
    "ConfigError",
    "IntegrationError",
    "OracleError",
    "RunConfig",
    "TrajectoryFormatter",
    "TrajectoryRecord",
    "build_integrator",
    "invariant_drift_report",
    "iteration_report",
    "load_config",
    "order_study",
    "property_check",
    "read_csv",
    "reference_oracle",
    "run_sweep",
    "run_trajectory",
    "write_csv",
]

from ._formatter import TrajectoryFormatter, read_csv, write_csv
from .config import METHOD_IDS, ConfigError, RunConfig, load_config
from .harness import IntegrationError, TrajectoryRecord, run_trajectory
from .integrators import build_integrator
from .oracle import OracleError, reference_oracle
from .reports import (
    invariant_drift_report,
    iteration_report,
    order_study,
    property_check,
)
from .sweep import run_sweep
