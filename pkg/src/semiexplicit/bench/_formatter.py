from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from rich import box
from rich.table import Table

from ..console import console
from ..core.formatter import Formatter
from ..solvers.projection import SolverStats
from .harness import RunTotals, TrajectoryRecord

if TYPE_CHECKING:  # pragma: no cover
    from .reports import (
        DriftSummary,
        IterationReport,
        OrderStudy,
        PropertyReport,
        RunSummary,
    )
    from .sweep import SweepResult

TOTALS_COLUMNS = [
    "total_steps",
    "total_iterations",
    "total_failures",
    "max_update_norm",
    "max_defect",
]


def _fmt(value: float | None) -> str:
    return "-" if value is None or math.isnan(value) else f"{value:.3e}"


def _cell(value: float | int | None) -> str:
    if value is None:
        return ""
    return repr(float(value)) if isinstance(value, float) else str(value)


def _optional_float(value: str) -> float | None:
    return float(value) if value else None


def csv_header(dim: int, invariants: Iterable[str]) -> list[str]:
    """Column order: time, `q1..qd`, `p1..pd`, defect_norm, one
    `inv_<name>_relerr` per invariant, solver columns, then run totals."""
    return [
        "time",
        *(f"q{i}" for i in range(1, dim + 1)),
        *(f"p{i}" for i in range(1, dim + 1)),
        "defect_norm",
        *(f"inv_{name}_relerr" for name in invariants),
        "solver_iters",
        "solver_converged",
        "solver_update_norm",
        *TOTALS_COLUMNS,
    ]


def _row(record: TrajectoryRecord) -> list[str]:
    stats, totals = record.stats, record.totals
    return [
        _cell(record.time),
        *(_cell(float(v)) for v in record.q),
        *(_cell(float(v)) for v in record.p),
        _cell(record.defect_norm),
        *(_cell(float(v)) for v in record.invariant_errors.values()),
        _cell(stats.iterations) if stats else "",
        str(stats.converged).lower() if stats else "",
        _cell(stats.final_update_norm) if stats else "",
        str(totals.steps),
        str(totals.iterations),
        str(totals.failures),
        _cell(totals.max_update_norm),
        _cell(totals.max_defect),
    ]


def write_csv(records: Iterable[TrajectoryRecord], path: str | Path) -> Path:
    """Stream `records` to a new CSV file at `path`.

    If the stream raises, the partly written file is removed before the error
    propagates.
    """
    path = Path(path)
    f = open(path, "x", newline="", encoding="utf-8")
    try:
        with f:
            f_writer = csv.writer(
                f, delimiter=",", quotechar='"', quoting=csv.QUOTE_MINIMAL
            )
            header_written = False
            for record in records:
                if not header_written:
                    f_writer.writerow(
                        csv_header(record.q.size, record.invariant_errors)
                    )
                    header_written = True
                f_writer.writerow(_row(record))
    except BaseException:
        path.unlink(missing_ok=True)
        raise
    return path.absolute()


def read_csv(path: str | Path) -> list[TrajectoryRecord]:
    """Rebuild the records of a trajectory written by `write_csv`.

    The copy `(x, y)` and wall-clock time are not stored and come back empty.
    """
    with open(Path(path), newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        columns = reader.fieldnames or []
        q_cols = [c for c in columns if c[0] == "q" and c[1:].isdigit()]
        p_cols = [c for c in columns if c[0] == "p" and c[1:].isdigit()]
        inv_cols = {
            c: c[len("inv_") : -len("_relerr")]
            for c in columns
            if c.startswith("inv_") and c.endswith("_relerr")
        }
        records = []
        for row in reader:
            stats = None
            if row["solver_iters"]:
                stats = SolverStats(
                    int(row["solver_iters"]),
                    float(row["solver_update_norm"]),
                    row["solver_converged"] == "true",
                )
            totals = RunTotals(
                int(row["total_steps"]),
                int(row["total_iterations"]),
                int(row["total_failures"]),
                float(row["max_update_norm"]),
                float(row["max_defect"]),
            )
            records.append(
                TrajectoryRecord(
                    totals.steps,
                    float(row["time"]),
                    np.array([float(row[c]) for c in q_cols]),
                    np.array([float(row[c]) for c in p_cols]),
                    {name: float(row[c]) for c, name in inv_cols.items()},
                    _optional_float(row["defect_norm"]),
                    stats,
                    totals,
                )
            )
    return records


def _table(title: str, *columns: str) -> Table:
    table = Table(
        title=title,
        title_style="bold italic",
        box=box.SIMPLE_HEAD,
        show_edge=True,
        show_lines=False,
    )
    for i, column in enumerate(columns):
        table.add_column(column, justify="left" if i == 0 else "right", no_wrap=True)
    return table


def _render(*tables: Table) -> str:
    with console.capture() as capture:
        for table in tables:
            console.print(table)
    return capture.get()


class TrajectoryFormatter(Formatter):
    """Plain-text summaries and CSV files of recorded trajectories."""

    def show(self, records: Sequence[TrajectoryRecord]) -> str:
        if not records:
            return ""
        first, last = records[0], records[-1]
        table = _table(
            f"t = {first.time:g} .. {last.time:g} ({len(records)} records)",
            "quantity",
            "final",
            "max |.|",
        )
        for name, error in last.invariant_errors.items():
            worst = max(abs(r.invariant_errors[name]) for r in records)
            table.add_row(f"{name} rel. error", _fmt(error), _fmt(worst))
        if last.defect_norm is not None:
            worst_defect = last.totals.max_defect
            table.add_row("defect", _fmt(last.defect_norm), _fmt(worst_defect))
        return _render(table)

    def save(self, records: Sequence[TrajectoryRecord], path: str | Path) -> Path:
        return write_csv(records, path)


def run_summary_table(summary: RunSummary) -> str:
    final = summary.final
    table = _table(summary.label, "quantity", "final", "max |.|")
    if final is None:
        return _render(table)
    for name, error in final.invariant_errors.items():
        table.add_row(
            f"{name} rel. error", _fmt(error), _fmt(summary.max_errors.get(name))
        )
    if final.defect_norm is not None:
        table.add_row("defect", _fmt(final.defect_norm), _fmt(final.totals.max_defect))
    totals = final.totals
    table.add_row("steps", str(totals.steps), "")
    if totals.iterations:
        table.add_row("mean iterations", f"{totals.mean_iterations:.2f}", "")
        table.add_row("solver failures", str(totals.failures), "")
    table.add_row("wall clock", f"{totals.elapsed:.2f}s", "")
    return _render(table)


def order_study_table(study: OrderStudy) -> str:
    labels = list(study.slopes)
    dts = list(dict.fromkeys(row.dt for row in study.rows))
    table = _table("Max relative error in H", "dt", *labels)
    errors = {(row.label, row.dt): row.max_error for row in study.rows}
    for dt in dts:
        table.add_row(f"{dt:g}", *(_fmt(errors.get((lb, dt))) for lb in labels))
    table.add_row("slope", *(f"{study.slopes[lb]:.2f}" for lb in labels))
    return _render(table)


def write_order_study(study: OrderStudy, path: str | Path) -> Path:
    """CSV of `method, dt, max_rel_h_error, fitted_slope`."""
    path = Path(path)
    with open(path, "x", newline="", encoding="utf-8") as f:
        f_writer = csv.writer(f)
        f_writer.writerow(["method", "dt", "max_rel_h_error", "fitted_slope"])
        for row in study.rows:
            f_writer.writerow(
                [
                    row.label,
                    repr(row.dt),
                    repr(row.max_error),
                    repr(study.slopes[row.label]),
                ]
            )
    return path.absolute()


def drift_table(title: str, report: dict[str, DriftSummary]) -> str:
    table = _table(title, "invariant", "max |rel. error|", "drift / unit time")
    for name, drift in report.items():
        table.add_row(name, _fmt(drift.max_abs_error), _fmt(drift.slope))
    return _render(table)


def iteration_table(title: str, report: IterationReport) -> str:
    table = _table(title, "steps", "NW_itr", "max update", "max defect", "failures")
    mean = "-" if report.mean_iterations is None else f"{report.mean_iterations:.2f}"
    table.add_row(
        str(report.steps),
        mean,
        _fmt(report.max_update_norm),
        _fmt(report.max_defect),
        str(report.failures),
    )
    return _render(table)


def property_table(title: str, report: PropertyReport) -> str:
    table = _table(title, "samples", "max |M^T J M - J|", "max symmetry error")
    table.add_row(
        str(report.samples),
        _fmt(report.max_symplecticity_defect),
        _fmt(report.max_symmetry_error),
    )
    return _render(table)


def sweep_table(results: Sequence[SweepResult]) -> str:
    table = _table(
        "Sweep", "run", "steps", "max |H error|", "max defect", "NW_itr", "status"
    )
    for result in results:
        mean = (
            "-" if result.mean_iterations is None else f"{result.mean_iterations:.2f}"
        )
        table.add_row(
            result.label,
            str(result.steps),
            _fmt(result.max_h_error),
            _fmt(result.max_defect),
            mean,
            result.error or "ok",
        )
    return _render(table)
