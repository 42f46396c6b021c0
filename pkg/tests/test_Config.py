from pathlib import Path

import pytest

from semiexplicit.bench.config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    load_config,
    parse,
)
from semiexplicit.extended import triple_jump
from semiexplicit.solvers import SolverConfig

NLS_CONFIG = """
# NLS lattice, fourth-order semiexplicit method
model = nls
nls_n = 5
method = semiexplicit
composition = triple_jump
order = 4
dt = 0.001
T = 10   # a short run
eps = 1e-13
solver = broyden
fuse = yes
"""


def test_defaults_are_valid():
    cfg = RunConfig().validate()
    assert (cfg.model, cfg.method, cfg.order, cfg.dt, cfg.stride) == (
        "quartic",
        "semiexplicit",
        2,
        0.01,
        1,
    )


def test_parse():
    cfg = parse(NLS_CONFIG).validate()
    assert cfg.model == "nls" and cfg.nls_n == 5
    assert cfg.composition == "triple_jump" and cfg.order == 4
    assert cfg.dt == 0.001 and cfg.T == 10.0
    assert cfg.solver_config() == SolverConfig(1e-13, 100, "broyden")
    assert cfg.fuse is True
    assert cfg.scheme() == triple_jump(4)


def test_parse_lists_and_optionals():
    cfg = parse("q0 = 1, 2.5\np0 = -1, 0\nomega = 20\nout = none")
    assert cfg.q0 == (1.0, 2.5) and cfg.p0 == (-1.0, 0.0)
    assert cfg.omega == 20.0
    assert cfg.out is None


def test_parse_on_top_of_base():
    base = RunConfig(model="vortex", dt=0.1)
    cfg = parse("T = 5", base)
    assert (cfg.model, cfg.dt, cfg.T) == ("vortex", 0.1, 5.0)


def test_to_text_round_trip():
    cfg = RunConfig(
        model="nls",
        q0=(3.0, 0.01),
        p0=(1.0, 0.0),
        nls_n=2,
        method="tao",
        omega=100.0,
        composition="suzuki",
        order=6,
        dt=1e-3,
        T=0.1,
        fuse=False,
        out="run.csv",
    )
    assert parse(cfg.to_text()) == cfg


def test_stage_iteration_round_trip():
    cfg = RunConfig(method="irk4", irk_iteration="newton")
    assert "irk_iteration = newton" in cfg.to_text()
    assert parse(cfg.to_text()).irk_iteration == "newton"


def test_to_text_skips_unset_values():
    text = RunConfig().to_text()
    assert "omega" not in text and "q0" not in text and "out" not in text
    assert "fuse = false" in text


def test_load_config(tmp_path: Path):
    path = tmp_path / "nls.cfg"
    path.write_text(NLS_CONFIG, encoding="utf-8")
    assert load_config(path) == parse(NLS_CONFIG)


def test_load_missing_config(tmp_path: Path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")


def test_flags_override_file():
    cfg = apply_overrides(parse(NLS_CONFIG), {"dt": 0.01, "T": None, "order": 6})
    assert cfg.dt == 0.01
    assert cfg.T == 10.0
    assert cfg.order == 6


def test_unknown_override():
    with pytest.raises(ConfigError):
        apply_overrides(RunConfig(), {"timestep": 0.1})


@pytest.mark.parametrize(
    "text",
    [
        "timestep = 0.1",
        "dt 0.1",
        "dt = fast",
        "nls_n = 2.5",
        "fuse = maybe",
        "dt = 0.1\ndt = 0.2",
    ],
)
def test_malformed_text(text):
    with pytest.raises(ConfigError):
        parse(text)


@pytest.mark.parametrize(
    "changes",
    [
        {"model": "kepler"},
        {"model": "nls", "nls_n": 1},
        {"model": "vortex", "vortex_ic": "tripole"},
        {"q0": (1.0,)},
        {"q0": (1.0,), "p0": (1.0, 2.0)},
        {"method": "leapfrog"},
        {"composition": "mclachlan"},
        {"composition": "triple_jump", "order": 3},
        {"composition": "yoshida6", "order": 4},
        {"order": 4},
        {"method": "midpoint", "composition": "suzuki", "order": 4},
        {"method": "tao"},
        {"method": "tao", "omega": float("inf")},
        {"method": "tao", "omega": 20.0, "fuse": True},
        {"method": "irk4", "fuse": True},
        {"dt": 0.0},
        {"dt": float("nan")},
        {"T": -1.0},
        {"stride": 0},
        {"solver": "anderson"},
        {"method": "midpoint", "irk_iteration": "picard"},
        {"eps": 0.0},
        {"max_iterations": 0},
    ],
)
def test_invalid_configs(changes):
    with pytest.raises(ConfigError):
        RunConfig().replace(**changes).validate()


def test_zero_terminal_time_is_valid():
    assert RunConfig(T=0.0).validate().T == 0.0


def test_negative_step_is_valid():
    assert RunConfig(dt=-0.01).validate().dt == -0.01


@pytest.mark.parametrize(
    "changes, label",
    [
        ({}, "semiexplicit-2"),
        ({"composition": "triple_jump", "order": 4}, "semiexplicit-triple_jump-4"),
        ({"method": "tao", "omega": 20.0}, "tao-2"),
        ({"method": "irk4"}, "irk4"),
    ],
)
def test_labels(changes, label):
    assert RunConfig().replace(**changes).label == label
