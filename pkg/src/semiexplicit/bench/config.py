"""Run configuration.

A run is fully described by one flat text file of `key = value` lines:

    # NLS lattice, fourth-order semiexplicit method
    model = nls
    nls_n = 5
    method = semiexplicit
    composition = triple_jump
    order = 4
    dt = 0.001
    T = 10
    eps = 1e-10

Blank lines and `#` comments are ignored and list values (`q0`, `p0`) are
comma separated. Values given on the command line override the file, which
overrides the defaults of `RunConfig`.
"""

from __future__ import annotations

import dataclasses
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..extended.composition import (
    SCHEME_IDS,
    CompositionScheme,
    InvalidOrderError,
    scheme_for,
)
from ..models import MODEL_IDS
from ..models.nls import NlsModel
from ..models.vortex import VORTEX_CONFIGS
from ..solvers.irk import IRK_ITERATIONS
from ..solvers.projection import SOLVER_IDS, SolverConfig

SPLITTING_METHODS = ("pihajoki", "tao")
EXTENDED_METHODS = (*SPLITTING_METHODS, "semiexplicit")
IRK_METHODS = ("midpoint", "irk4")
METHOD_IDS = (*EXTENDED_METHODS, *IRK_METHODS)


class ConfigError(ValueError):
    """For when a run configuration has an unknown key, a malformed value or
    violates a `RunConfig` invariant."""

    pass


def _parse_floats(value: str) -> tuple[float, ...]:
    return tuple(float(v) for v in value.split(",") if v.strip())


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"'{value}' is not a boolean")


def _parse_optional_float(value: str) -> float | None:
    return None if value.strip().lower() in ("", "none") else float(value)


def _parse_optional_str(value: str) -> str | None:
    return None if value.strip().lower() in ("", "none") else value.strip()


PARSERS: dict[str, Callable[[str], Any]] = {
    "model": str.strip,
    "nls_n": int,
    "vortex_ic": str.strip,
    "q0": _parse_floats,
    "p0": _parse_floats,
    "method": str.strip,
    "composition": str.strip,
    "order": int,
    "dt": float,
    "T": float,
    "omega": _parse_optional_float,
    "eps": float,
    "max_iterations": int,
    "solver": str.strip,
    "irk_iteration": str.strip,
    "stride": int,
    "fuse": _parse_bool,
    "out": _parse_optional_str,
    "seed": int,
}


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a single run."""

    model: str = "quartic"
    nls_n: int = 5
    vortex_ic: str = "standard"
    q0: tuple[float, ...] | None = None
    p0: tuple[float, ...] | None = None
    method: str = "semiexplicit"
    composition: str = "none"
    order: int = 2
    dt: float = 1e-2
    T: float = 1.0
    omega: float | None = None
    eps: float = 1e-10
    max_iterations: int = 100
    solver: str = "simplified_newton"
    irk_iteration: str = "fixed_point"
    stride: int = 1
    fuse: bool = False
    out: str | None = None
    seed: int = 0

    def validate(self) -> RunConfig:
        """Check every invariant and return `self`."""
        if self.model not in MODEL_IDS:
            raise ConfigError(f"model must be one of {', '.join(MODEL_IDS)}.")
        if self.model == "nls" and self.nls_n < NlsModel.MIN_SITES:
            raise ConfigError(f"nls_n must be >= {NlsModel.MIN_SITES}.")
        if self.model == "vortex" and self.vortex_ic not in VORTEX_CONFIGS:
            raise ConfigError(
                f"vortex_ic must be one of {', '.join(VORTEX_CONFIGS)}."
            )
        if (self.q0 is None) != (self.p0 is None):
            raise ConfigError("q0 and p0 must be given together.")
        if self.q0 is not None and self.p0 is not None and len(self.q0) != len(self.p0):
            raise ConfigError("q0 and p0 must have the same length.")
        if self.method not in METHOD_IDS:
            raise ConfigError(f"method must be one of {', '.join(METHOD_IDS)}.")
        if self.composition not in SCHEME_IDS:
            raise ConfigError(f"composition must be one of {', '.join(SCHEME_IDS)}.")
        if self.method in EXTENDED_METHODS:
            try:
                scheme_for(self.composition, self.order)
            except InvalidOrderError as err:
                raise ConfigError(str(err)) from err
        elif self.composition != "none":
            raise ConfigError(f"{self.method} does not take a composition scheme.")
        if self.method == "tao":
            if self.omega is None or not math.isfinite(self.omega):
                raise ConfigError("tao needs a finite coupling frequency omega.")
            if self.fuse:
                raise ConfigError("fuse only applies to the Strang base step.")
        if self.fuse and self.method not in EXTENDED_METHODS:
            raise ConfigError("fuse only applies to the Strang base step.")
        if self.dt == 0 or not math.isfinite(self.dt):
            raise ConfigError("dt must be finite and nonzero.")
        if self.T < 0 or not math.isfinite(self.T):
            raise ConfigError("T must be finite and >= 0.")
        if self.stride < 1:
            raise ConfigError("stride must be >= 1.")
        if self.solver not in SOLVER_IDS:
            raise ConfigError(f"solver must be one of {', '.join(SOLVER_IDS)}.")
        if self.irk_iteration not in IRK_ITERATIONS:
            raise ConfigError(
                f"irk_iteration must be one of {', '.join(IRK_ITERATIONS)}."
            )
        try:
            self.solver_config()
        except ValueError as err:
            raise ConfigError(str(err)) from err
        return self

    def solver_config(self) -> SolverConfig:
        return SolverConfig(self.eps, self.max_iterations, self.solver)

    def scheme(self) -> CompositionScheme:
        return scheme_for(self.composition, self.order)

    @property
    def label(self) -> str:
        """Short method label, e.g. `semiexplicit-triple_jump-4`."""
        if self.method in IRK_METHODS:
            return self.method
        if self.composition == "none":
            return f"{self.method}-{self.order}"
        return f"{self.method}-{self.composition}-{self.order}"

    def replace(self, **changes: Any) -> RunConfig:
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        """Canonical config file text; `parse(cfg.to_text())` rebuilds `cfg`."""
        lines = []
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ", ".join(repr(v) for v in value)
            elif isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{field.name} = {value}")
        return "\n".join(lines) + "\n"


def parse_mapping(values: Mapping[str, str]) -> dict[str, Any]:
    """Convert raw string values to field values, rejecting unknown keys."""
    parsed: dict[str, Any] = {}
    for key, raw in values.items():
        if key not in PARSERS:
            raise ConfigError(f"Unknown config key '{key}'.")
        try:
            parsed[key] = PARSERS[key](raw)
        except ValueError as err:
            raise ConfigError(f"Bad value for '{key}': {raw!r} ({err}).") from err
    return parsed


def parse(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse config file text on top of `base` (defaults when omitted)."""
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"Line {number}: expected 'key = value', got {line!r}.")
        key = key.strip()
        if key in values:
            raise ConfigError(f"Line {number}: duplicate key '{key}'.")
        values[key] = value.strip()
    return (base or RunConfig()).replace(**parse_mapping(values))


def load_config(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    """Read a config file; the result is not validated yet."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"Config file '{path}' could not be read.") from err
    return parse(text, base)


def apply_overrides(cfg: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Apply already-typed values, skipping those left at `None`."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(changes) - set(PARSERS)
    if unknown:
        raise ConfigError(f"Unknown config key(s): {', '.join(sorted(unknown))}.")
    return cfg.replace(**changes)
