"""Grid-sweep workers.

Usage:
    from tmlab.workers import PressureWorker, SweepRunner

    result = SweepRunner(PressureWorker(rs, potential)).run([0.0, 0.5, 1.0])
"""

from tmlab.workers.base import WorkerBase, WorkerResult, WorkerStatus
from tmlab.workers.pressure_worker import PressureWorker, gamma_key
from tmlab.workers.runner import RunnerResult, SweepRunner, configure_logging

__all__ = [
    "PressureWorker",
    "RunnerResult",
    "SweepRunner",
    "WorkerBase",
    "WorkerResult",
    "WorkerStatus",
    "configure_logging",
    "gamma_key",
]
