from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from pathlib import Path

    from ..bench.harness import TrajectoryRecord


class Formatter(ABC):
    """Base class for trajectory output.

    To implement your own `Formatter`, subclass this class.
    """

    @abstractmethod
    def show(self, records: Sequence[TrajectoryRecord]) -> str:
        """Return a summary of the trajectory as text."""

    @abstractmethod
    def save(self, records: Sequence[TrajectoryRecord], path: str | Path) -> Path:
        """Save the trajectory to a file.

        Args:
            records: Recorded rows, in time order.
            path: File save path. Must not exist yet.

        Returns:
            Absolute path of the written file.
        """
