"""Sweep runner.

Splits a list of independent items into batches, runs the batches of one
worker on a thread pool and merges the outputs back in input order, so a
sweep gives the same result for any thread count.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from tmlab.config import get_settings
from tmlab.workers.base import WorkerBase, WorkerResult

UTC = timezone.utc

logger = logging.getLogger(__name__)


@dataclass
class RunnerResult:
    """Result of a complete sweep.

    Attributes:
        started_at: When the sweep started
        completed_at: When the sweep completed
        batches_run: Number of batches executed
        total_processed: Items processed across all batches
        total_failed: Items failed across all batches
        batch_results: Individual result per batch, in input order
        outputs: Item id to output, in input order
        errors: Top-level errors during the sweep
    """

    started_at: datetime
    completed_at: datetime | None = None
    batches_run: int = 0
    total_processed: int = 0
    total_failed: int = 0
    batch_results: list[WorkerResult] = field(default_factory=list)
    outputs: dict[str, Any] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for logging."""
        return {
            "started_at": self.started_at.isoformat(),
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
            "duration_ms": (
                (self.completed_at - self.started_at).total_seconds() * 1000 if self.completed_at else None
            ),
            "batches_run": self.batches_run,
            "total_processed": self.total_processed,
            "total_failed": self.total_failed,
            "errors": self.errors,
        }


class SweepRunner:
    """Runs one worker over many items in parallel batches.

    Usage:
        runner = SweepRunner(PressureWorker(rs, potential))
        result = runner.run(gammas)
    """

    def __init__(
        self,
        worker: WorkerBase,
        threads: int | None = None,
        batch_size: int | None = None,
    ) -> None:
        settings = get_settings()
        self.worker = worker
        self.threads = threads or settings.WORKER_THREADS or os.cpu_count() or 1
        self.batch_size = batch_size or worker.batch_size or settings.WORKER_BATCH_SIZE
        self._logger = logging.getLogger(self.__class__.__name__)

    def _batches(self, items: list) -> list[list]:
        return [items[i : i + self.batch_size] for i in range(0, len(items), self.batch_size)]

    def run(self, items: list) -> RunnerResult:
        """Process all items; batch results are merged in input order."""
        result = RunnerResult(started_at=datetime.now(UTC))
        batches = self._batches(list(items))
        self._logger.info(
            f"[{self.worker.worker_name}] Starting sweep",
            extra={"items": len(items), "batches": len(batches), "threads": self.threads},
        )

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [pool.submit(self.worker.run, batch) for batch in batches]
            for future in futures:
                try:
                    batch_result = future.result()
                except Exception as e:
                    error_msg = f"{self.worker.worker_name} batch failed: {e}"
                    result.errors.append(error_msg)
                    self._logger.error(error_msg, exc_info=True)
                    continue
                result.batch_results.append(batch_result)
                result.batches_run += 1
                result.total_processed += batch_result.processed_count
                result.total_failed += batch_result.failed_count
                result.outputs.update(batch_result.outputs)

        result.completed_at = datetime.now(UTC)
        self._logger.info(f"[{self.worker.worker_name}] Sweep completed", extra=result.to_dict())
        return result


def configure_logging(level: int = logging.INFO) -> None:
    """Configure logging for lab runs.

    Args:
        level: Logging level (default: INFO)
    """
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logging.getLogger("tmlab").setLevel(level)
