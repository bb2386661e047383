"""Run manifests written next to every CLI output."""

import csv
import json
import math
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from tmlab import __version__


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI run.

    Re-running a subcommand with the same parameters reproduces the CSV
    byte for byte; ``wall_time_s`` is the only field that varies.
    """

    model_config = ConfigDict(extra="forbid")

    subcommand: str = Field(description="CLI subcommand that produced the output")
    parameters: dict[str, Any] = Field(default_factory=dict, description="Resolved flag values")
    language_hash: str | None = Field(default=None, description="SHA-256 of the factor language used")
    tolerances: dict[str, float] = Field(default_factory=dict, description="Numerical tolerances in force")
    tool_version: str = Field(default=__version__, description="tmlab version")
    wall_time_s: float = Field(default=0.0, ge=0, description="Elapsed wall-clock time")
    results: dict[str, Any] = Field(default_factory=dict, description="Summary values of the run")

    def to_json(self) -> str:
        """UTF-8 JSON with sorted keys."""
        return json.dumps(_finite(self.model_dump(mode="json")), sort_keys=True, indent=2) + "\n"


def _finite(value: Any) -> Any:
    """Non-finite floats become null."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def manifest_path(out: Path) -> Path:
    """``p.csv`` -> ``p.csv.manifest.json``."""
    return out.with_name(out.name + ".manifest.json")


def write_manifest(manifest: RunManifest, out: Path) -> Path:
    path = manifest_path(out)
    path.write_text(manifest.to_json(), encoding="utf-8")
    return path


def read_manifest(path: Path) -> RunManifest:
    return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(path: Path, header: list[str], rows: list[list[Any]]) -> None:
    """RFC-4180 CSV; floats are written with repr so they round-trip."""
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows([_cell(v) for v in row] for row in rows)
