from __future__ import annotations

import logging
import signal
from collections.abc import Sequence
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path

from ._formatter import write_csv
from .config import RunConfig
from .harness import IntegrationError, run_trajectory
from .reports import RunSummary

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SweepResult:
    label: str
    path: Path | None
    steps: int
    max_h_error: float
    max_defect: float | None
    mean_iterations: float | None
    failures: int
    error: str | None = None


def _ignore_sigint() -> None:
    signal.signal(signal.SIGINT, signal.SIG_IGN)


def run_one(cfg: RunConfig) -> SweepResult:
    """Run `cfg`, writing its CSV when `cfg.out` is set.

    A failed integration or an unwritable output is reported in the result
    instead of raised so one bad run does not abort the sweep. A failed run
    leaves no output file behind.
    """
    summary = RunSummary(cfg.label)
    records = summary.watch(run_trajectory(cfg))
    path = None
    try:
        if cfg.out:
            path = write_csv(records, cfg.out)
        else:
            for _ in records:
                pass
    except IntegrationError as err:
        logger.error("%s aborted: %s", cfg.label, err)
        return SweepResult(
            cfg.label, None, err.step - 1, float("nan"), None, None, 0, str(err)
        )
    except OSError as err:
        logger.error("%s could not write %s: %s", cfg.label, cfg.out, err)
        steps = summary.final.step if summary.final is not None else 0
        return SweepResult(
            cfg.label, None, steps, float("nan"), None, None, 0, str(err)
        )

    final = summary.final
    assert final is not None
    totals = final.totals
    return SweepResult(
        cfg.label,
        path,
        totals.steps,
        summary.max_errors.get("H", 0.0),
        totals.max_defect if final.defect_norm is not None else None,
        totals.mean_iterations if totals.iterations else None,
        totals.failures,
    )


def run_sweep(configs: Sequence[RunConfig], workers: int = 1) -> list[SweepResult]:
    """Run independent configs, in parallel processes when `workers > 1`.

    Each run stays single-threaded and writes its own file; results come back
    in the order of `configs`.
    """
    for cfg in configs:
        cfg.validate()
    outputs = [cfg.out for cfg in configs if cfg.out]
    if len(outputs) != len(set(outputs)):
        raise ValueError("Sweep runs must write to distinct output files.")
    logger.info("sweep of %d runs on %d worker(s)", len(configs), workers)
    if workers <= 1 or len(configs) <= 1:
        return [run_one(cfg) for cfg in configs]
    with Pool(min(workers, len(configs)), _ignore_sigint) as pool:
        try:
            return pool.map(run_one, configs)
        except KeyboardInterrupt:
            pool.terminate()
            pool.join()
            raise
