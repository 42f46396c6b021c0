import argparse
import logging
import sys
from collections.abc import Sequence
from importlib.metadata import version
from pathlib import Path
from typing import Any

from rich.logging import RichHandler

from .bench._formatter import (
    TrajectoryFormatter,
    drift_table,
    iteration_table,
    order_study_table,
    property_table,
    read_csv,
    run_summary_table,
    sweep_table,
    write_csv,
    write_order_study,
)
from .bench.config import (
    METHOD_IDS,
    ConfigError,
    RunConfig,
    apply_overrides,
    load_config,
)
from .bench.harness import IntegrationError, run_trajectory
from .bench.reports import (
    MIN_DRIFT_RECORDS,
    RunSummary,
    invariant_drift_report,
    iteration_report,
    order_study,
    property_check,
)
from .bench.sweep import run_sweep
from .console import console
from .extended.composition import SCHEME_IDS
from .models import MODEL_IDS
from .models.vortex import VORTEX_CONFIGS
from .solvers.irk import IRK_ITERATIONS
from .solvers.projection import SOLVER_IDS

logger = logging.getLogger("semiexplicit")


class PositiveIntAction(argparse.Action):
    """Restrict integer inputs to values >= 1."""

    def __call__(self, parser, namespace, values, option_string=None):
        if values < 1:
            parser.error(f"{option_string} must be >=1")
        setattr(namespace, self.dest, values)


class NonzeroFloatAction(argparse.Action):
    """Reject a zero time step."""

    def __call__(self, parser, namespace, values, option_string=None):
        if values == 0:
            parser.error(f"{option_string} must be nonzero")
        setattr(namespace, self.dest, values)


class FloatListAction(argparse.Action):
    """Parse a comma-separated list of floats."""

    def __call__(self, parser, namespace, values, option_string=None):
        try:
            floats = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            parser.error(f"{option_string} must be a comma-separated list of numbers")
        if not floats:
            parser.error(f"{option_string} must not be empty")
        setattr(namespace, self.dest, floats)


class MethodListAction(argparse.Action):
    """Parse a comma-separated list of method ids."""

    def __call__(self, parser, namespace, values, option_string=None):
        methods = [v.strip() for v in values.split(",") if v.strip()]
        unknown = [m for m in methods if m not in METHOD_IDS]
        if not methods or unknown:
            parser.error(
                f"{option_string} must list methods from: {', '.join(METHOD_IDS)}"
            )
        setattr(namespace, self.dest, methods)


def _logging_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_mutually_exclusive_group()
    group.add_argument(
        "-v", "--verbose", action="store_true", help="Show debug messages."
    )
    group.add_argument(
        "-q", "--quiet", action="store_true", help="Only show warnings and errors."
    )
    return parent


def _run_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "-c",
        "--config",
        type=Path,
        help="Run config file of `key = value` lines; flags override it.",
    )
    parent.add_argument(
        "--model",
        choices=MODEL_IDS,
        help=f"Model problem (choices: {', '.join(MODEL_IDS)}).",
    )
    parent.add_argument(
        "--nls-n",
        dest="nls_n",
        type=int,
        action=PositiveIntAction,
        help="Number of NLS lattice sites.",
    )
    parent.add_argument(
        "--vortex-ic",
        dest="vortex_ic",
        choices=list(VORTEX_CONFIGS),
        help="Vortex initial configuration.",
    )
    parent.add_argument(
        "--q0",
        action=FloatListAction,
        help="Initial positions, comma separated (overrides the model default).",
    )
    parent.add_argument(
        "--p0",
        action=FloatListAction,
        help="Initial momenta, comma separated (overrides the model default).",
    )
    parent.add_argument(
        "--method",
        choices=METHOD_IDS,
        help=f"Integrator (choices: {', '.join(METHOD_IDS)}).",
    )
    parent.add_argument(
        "--composition",
        choices=SCHEME_IDS,
        help=f"Composition scheme (choices: {', '.join(SCHEME_IDS)}).",
    )
    parent.add_argument("--order", type=int, help="Order of the composed method.")
    parent.add_argument(
        "--dt", type=float, action=NonzeroFloatAction, help="Time step."
    )
    parent.add_argument("--T", dest="T", type=float, help="Terminal time.")
    parent.add_argument(
        "--omega", type=float, help="Coupling frequency of the tao method."
    )
    parent.add_argument("--eps", type=float, help="Solver tolerance.")
    parent.add_argument(
        "--max-iterations",
        dest="max_iterations",
        type=int,
        action=PositiveIntAction,
        help="Solver iteration cap per step.",
    )
    parent.add_argument(
        "--solver",
        choices=SOLVER_IDS,
        help=f"Projection solver (choices: {', '.join(SOLVER_IDS)}).",
    )
    parent.add_argument(
        "--irk-iteration",
        dest="irk_iteration",
        choices=IRK_ITERATIONS,
        help="Stage iteration of midpoint and irk4 (default: fixed_point).",
    )
    parent.add_argument(
        "--fuse",
        action="store_true",
        default=None,
        help="Merge adjacent half-flows of composed Strang steps.",
    )
    parent.add_argument(
        "--seed", type=int, help="Seed for property-check sampling."
    )
    return parent


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiexplicit",
        description="Symplectic integrators for non-separable Hamiltonian \
systems and their benchmark harness.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {version('semiexplicit-integrator')}",
    )
    logging_parent = _logging_parent()
    run_parent = _run_parent()
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    run = commands.add_parser(
        "run",
        parents=[logging_parent, run_parent],
        help="Integrate one trajectory.",
    )
    run.add_argument("-o", "--out", type=Path, help="Trajectory CSV output path.")
    run.add_argument(
        "--stride",
        type=int,
        action=PositiveIntAction,
        help="Record every n-th step.",
    )
    run.add_argument(
        "--check-properties",
        action="store_true",
        help="Also measure symplecticity and symmetry at random states.",
    )
    run.add_argument(
        "--samples",
        type=int,
        default=20,
        action=PositiveIntAction,
        help="Random states for --check-properties (default: 20).",
    )
    run.add_argument(
        "--save-config",
        type=Path,
        help="Write the fully resolved run config to this path.",
    )
    run.set_defaults(handler=run_command)

    study = commands.add_parser(
        "order-study",
        parents=[logging_parent, run_parent],
        help="Fit convergence orders over a list of time steps.",
    )
    study.add_argument(
        "--dts",
        required=True,
        action=FloatListAction,
        help="Comma-separated time steps (>= 4, spanning a decade).",
    )
    study.add_argument(
        "--methods",
        action=MethodListAction,
        help="Comma-separated methods to compare (default: --method).",
    )
    study.add_argument("-o", "--out", type=Path, help="Order study CSV output path.")
    study.set_defaults(handler=order_study_command)

    sweep = commands.add_parser(
        "sweep",
        parents=[logging_parent],
        help="Run several config files, optionally in parallel.",
    )
    sweep.add_argument("configs", type=Path, nargs="+", help="Run config files.")
    sweep.add_argument(
        "-w",
        "--workers",
        type=int,
        default=1,
        action=PositiveIntAction,
        help="Worker processes (default: 1).",
    )
    sweep.add_argument(
        "--out-dir",
        type=Path,
        help="Directory for the CSVs of configs without an `out` key.",
    )
    sweep.set_defaults(handler=sweep_command)

    report = commands.add_parser(
        "report",
        parents=[logging_parent],
        help="Summarize saved trajectory CSVs.",
    )
    report.add_argument("paths", type=Path, nargs="+", help="Trajectory CSV files.")
    report.set_defaults(handler=report_command)
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=console, show_path=False))
    logger.setLevel(level)
    logger.propagate = False


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then the flags."""
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides: dict[str, Any] = {
        key: getattr(args, key, None)
        for key in (
            "model",
            "nls_n",
            "vortex_ic",
            "method",
            "composition",
            "order",
            "dt",
            "T",
            "omega",
            "eps",
            "max_iterations",
            "solver",
            "irk_iteration",
            "stride",
            "fuse",
            "seed",
        )
    }
    for key in ("q0", "p0"):
        value = getattr(args, key, None)
        overrides[key] = tuple(value) if value is not None else None
    out = getattr(args, "out", None)
    if args.command == "run" and out is not None:
        overrides["out"] = str(out)
    return apply_overrides(cfg, overrides).validate()


def run_command(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.save_config:
        args.save_config.write_text(cfg.to_text(), encoding="utf-8")
    summary = RunSummary(cfg.label)
    records = summary.watch(run_trajectory(cfg))
    if cfg.out:
        path = write_csv(records, cfg.out)
        print(f"Trajectory saved: {path}")
    else:
        for _ in records:
            pass
    print(run_summary_table(summary), end="")
    if args.check_properties:
        report = property_check(cfg, args.samples)
        print(property_table(f"{cfg.label} step properties", report), end="")
    return 0


def order_study_command(args: argparse.Namespace) -> int:
    template = build_config(args)
    methods = args.methods or [template.method]
    templates = []
    for method in methods:
        cfg = template.replace(method=method)
        if method in ("midpoint", "irk4"):
            cfg = cfg.replace(composition="none", order=2, fuse=False)
        if method == "tao" and cfg.omega is None:
            raise ConfigError("tao needs --omega.")
        templates.append(cfg.validate())
    study = order_study(templates, args.dts)
    print(order_study_table(study), end="")
    if args.out:
        print(f"Order study saved: {write_order_study(study, args.out)}")
    return 0


def sweep_command(args: argparse.Namespace) -> int:
    configs = []
    for path in args.configs:
        cfg = load_config(path)
        if cfg.out is None and args.out_dir is not None:
            cfg = cfg.replace(out=str(args.out_dir / f"{path.stem}.csv"))
        configs.append(cfg.validate())
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    results = run_sweep(configs, args.workers)
    print(sweep_table(results), end="")
    return 1 if any(result.error for result in results) else 0


def report_command(args: argparse.Namespace) -> int:
    formatter = TrajectoryFormatter()
    for path in args.paths:
        records = read_csv(path)
        if not records:
            print(f"{path}: no records", file=sys.stderr)
            return 1
        print(formatter.show(records), end="")
        if len(records) >= MIN_DRIFT_RECORDS:
            drift = invariant_drift_report(records)
            print(drift_table(f"{path.name} invariant drift", drift), end="")
        if records[-1].totals.iterations:
            report = iteration_report(records)
            print(iteration_table(f"{path.name} solver", report), end="")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Semiexplicit integrator CLI.

    Args:
        argv (Sequence[str] | None, optional): Command line arguments. Defaults to None.

    Returns:
        int: Exit status.
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help(sys.stderr)
        return 1

    setup_logging(args.verbose, args.quiet)
    try:
        return int(args.handler(args))
    except ConfigError as err:
        print(f"Configuration error: {err}", file=sys.stderr)
    except IntegrationError as err:
        print(str(err), file=sys.stderr)
    except FileExistsError as err:
        print(f"Output file '{err.filename}' already exists.", file=sys.stderr)
    except OSError as err:
        print(f"File error: {err}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
