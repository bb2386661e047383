"""Base worker abstraction for grid sweeps.

A worker takes a batch of independent work items (grid points), processes
each one, and reports per-item failures without aborting the batch. The
shared structures a worker reads (return systems, languages) must be
built before the batch starts and are treated as read-only.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Generic, TypeVar

from tmlab.errors import LabError

logger = logging.getLogger(__name__)


class WorkerStatus(str, Enum):
    """Status of a worker run."""

    SUCCESS = "success"
    PARTIAL = "partial"  # Some items processed, some failed
    FAILED = "failed"
    NO_WORK = "no_work"


@dataclass
class WorkerResult:
    """Result of one batch.

    Attributes:
        status: Overall status of the batch
        processed_count: Number of items successfully processed
        failed_count: Number of items that failed
        duration_ms: Time taken for the batch
        errors: Error details for failed items
        outputs: Item id to output, in processing order
    """

    status: WorkerStatus
    processed_count: int = 0
    failed_count: int = 0
    duration_ms: float = 0.0
    errors: list[dict[str, Any]] = field(default_factory=list)
    outputs: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for logging."""
        return {
            "status": self.status.value,
            "processed_count": self.processed_count,
            "failed_count": self.failed_count,
            "duration_ms": self.duration_ms,
            "errors": self.errors,
        }


T = TypeVar("T")
R = TypeVar("R")


class WorkerBase(ABC, Generic[T, R]):
    """Abstract base class for sweep workers.

    Subclasses name themselves, identify items and process one item.
    ``batch_size`` is the preferred batch size; ``None`` leaves it to the runner.
    """

    def __init__(self, batch_size: int | None = None) -> None:
        self.batch_size = batch_size
        self._logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def worker_name(self) -> str:
        """Return the worker name for logging."""

    @abstractmethod
    def get_item_id(self, item: T) -> str:
        """Stable identifier of an item, used as the output key."""

    @abstractmethod
    def process_item(self, item: T) -> R:
        """Process a single item.

        Raises:
            LabError: If the item cannot be processed
        """

    def run(self, items: list[T]) -> WorkerResult:
        """Process one batch; failures are recorded per item."""
        start = time.perf_counter()
        if not items:
            self._logger.debug(f"[{self.worker_name}] No items")
            return WorkerResult(status=WorkerStatus.NO_WORK, duration_ms=self._elapsed_ms(start))

        processed = 0
        failed = 0
        errors: list[dict[str, Any]] = []
        outputs: dict[str, Any] = {}
        self._logger.debug(f"[{self.worker_name}] Processing {len(items)} items")

        for item in items:
            item_id = self.get_item_id(item)
            try:
                outputs[item_id] = self.process_item(item)
                processed += 1
            except (LabError, ArithmeticError, ValueError) as e:
                failed += 1
                error_msg = str(e)[:500]
                errors.append({"item_id": item_id, "error": error_msg})
                self._logger.error(
                    f"[{self.worker_name}] Failed to process item {item_id}",
                    extra={"item_id": item_id, "error": error_msg},
                    exc_info=True,
                )

        if failed == 0:
            status = WorkerStatus.SUCCESS
        elif processed > 0:
            status = WorkerStatus.PARTIAL
        else:
            status = WorkerStatus.FAILED

        result = WorkerResult(
            status=status,
            processed_count=processed,
            failed_count=failed,
            duration_ms=self._elapsed_ms(start),
            errors=errors,
            outputs=outputs,
        )
        self._logger.debug(f"[{self.worker_name}] Batch complete", extra=result.to_dict())
        return result

    def _elapsed_ms(self, start: float) -> float:
        return (time.perf_counter() - start) * 1000
