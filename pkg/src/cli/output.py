"""CSV files with a `#` provenance header, and the run manifest that fills it."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from src.config.logger import get_logger
from src.utils.log_sanitizer import sanitize_log_input

logger = get_logger(__name__)

PACKAGE_NAME = "torus-vacant"
FALLBACK_VERSION = "0.1.0"
MISSING = "NA"


def code_version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION


@dataclass
class RunManifest:
    """Provenance block written as comment lines at the top of every emitted file."""

    subcommand: str
    config: dict[str, Any]
    output_dir: Path
    seed: Optional[int] = None
    version: str = field(default_factory=code_version)
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    extra: dict[str, Any] = field(default_factory=dict)

    def header_lines(self) -> list[str]:
        lines = [
            f"# torus-vacant {self.subcommand}",
            f"# version: {self.version}",
            f"# started_at: {self.started_at}",
            f"# config: {json.dumps(self.config, sort_keys=True, default=str)}",
        ]
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        for key, value in self.extra.items():
            lines.append(f"# {key}: {json.dumps(value, sort_keys=True, default=str)}")
        return lines


def format_cell(value: Any) -> str:
    """Shortest round-trip text for floats; NA for missing values."""
    if value is None:
        return MISSING
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        return format_cell(value.item())
    return str(value)


def write_csv(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    manifest: RunManifest,
) -> Path:
    """UTF-8, comma-separated, LF line endings, provenance header first."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for line in manifest.header_lines():
            f.write(line + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        count = 0
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
            count += 1
    logger.info(f"wrote {count} rows to {sanitize_log_input(str(path))}")
    return path


def read_csv(path: str | Path) -> tuple[dict[str, Any], list[dict[str, str]]]:
    """(header metadata, data rows) of a file written by ``write_csv``."""
    meta: dict[str, Any] = {}
    body: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line in f:
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition(": ")
                if sep:
                    try:
                        meta[key] = json.loads(value)
                    except json.JSONDecodeError:
                        meta[key] = value
            else:
                body.append(line)
    return meta, list(csv.DictReader(body))
