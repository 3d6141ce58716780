"""Append-only CSV cache of lattice Green values keyed by (d, canonical xi, method)."""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger, log_structured

logger = get_logger(__name__)

CACHE_VERSION = 1
CACHE_FILE = "lattice_green.csv"
COLUMNS = ["d", "xi", "G", "Gprime", "bound", "method", "radius"]
MISSING = "NA"


@dataclass(frozen=True)
class CacheEntry:
    d: int
    xi: tuple[int, ...]
    method: str
    green: Optional[float] = None
    green_bound: Optional[float] = None
    green_deriv: Optional[float] = None
    green_deriv_bound: Optional[float] = None
    radius: int = 0

    @property
    def key(self) -> tuple[int, tuple[int, ...], str]:
        return self.d, self.xi, self.method

    @property
    def bound(self) -> float:
        return max(b for b in (self.green_bound, self.green_deriv_bound, 0.0) if b is not None)

    def merge(self, other: "CacheEntry") -> "CacheEntry":
        """Fields present in ``other`` replace ours together with their bounds."""
        return replace(
            self,
            green=other.green if other.green is not None else self.green,
            green_bound=other.green_bound if other.green is not None else self.green_bound,
            green_deriv=other.green_deriv if other.green_deriv is not None else self.green_deriv,
            green_deriv_bound=(
                other.green_deriv_bound if other.green_deriv is not None else self.green_deriv_bound
            ),
            radius=max(self.radius, other.radius),
        )


def _fmt(value: Optional[float]) -> str:
    return MISSING if value is None else repr(float(value))


def _parse(value: str) -> Optional[float]:
    return None if value == MISSING else float(value)


class LatticeGreenCache:
    """In-memory map backed by an append-only CSV file.

    Writers hold a lock; readers only look up completed entries in a dict.
    A single ``bound`` column is stored per row, so a row carrying both G and G'
    records the larger of the two bounds for each.
    """

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[tuple[int, tuple[int, ...], str], CacheEntry] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.is_file():
            self._load()

    def __len__(self) -> int:
        return len(self._entries)

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8", newline="") as f:
            rows = csv.reader(line for line in f if not line.startswith("#"))
            header = next(rows, None)
            if header != COLUMNS:
                logger.warning(f"Ignoring lattice cache {self.path} with unexpected header {header}")
                return
            for row in rows:
                d, xi, green, deriv, bound, method, radius = row
                bound_value = float(bound)
                entry = CacheEntry(
                    d=int(d),
                    xi=tuple(int(c) for c in xi.split()),
                    method=method,
                    green=_parse(green),
                    green_bound=bound_value if green != MISSING else None,
                    green_deriv=_parse(deriv),
                    green_deriv_bound=bound_value if deriv != MISSING else None,
                    radius=int(radius),
                )
                existing = self._entries.get(entry.key)
                self._entries[entry.key] = existing.merge(entry) if existing else entry
        logger.debug(f"Loaded {len(self._entries)} lattice Green entries from {self.path}")

    def get(self, d: int, xi: tuple[int, ...], method: str) -> Optional[CacheEntry]:
        return self._entries.get((d, xi, method))

    def put(self, entry: CacheEntry) -> CacheEntry:
        with self._lock:
            existing = self._entries.get(entry.key)
            merged = existing.merge(entry) if existing else entry
            self._entries[entry.key] = merged
            if self.path is not None:
                self._append(merged)
        return merged

    def _append(self, entry: CacheEntry) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fresh = not self.path.exists()
        with open(self.path, "a", encoding="utf-8", newline="") as f:
            if fresh:
                f.write(f"# lattice Green cache, version={CACHE_VERSION}\n")
            writer = csv.writer(f, lineterminator="\n")
            if fresh:
                writer.writerow(COLUMNS)
            writer.writerow(
                [
                    entry.d,
                    " ".join(str(c) for c in entry.xi),
                    _fmt(entry.green),
                    _fmt(entry.green_deriv),
                    repr(entry.bound if math.isfinite(entry.bound) else 0.0),
                    entry.method,
                    entry.radius,
                ]
            )
        log_structured("lattice_cache_appended", {"d": entry.d, "xi": list(entry.xi), "method": entry.method})


_caches: dict[str, LatticeGreenCache] = {}
_caches_lock = threading.Lock()


def get_lattice_cache(config: Optional[Configuration] = None) -> LatticeGreenCache:
    """The process-wide cache stored under ``config.cache_dir``."""
    config = config or get_configuration()
    path = str(Path(config.cache_dir) / CACHE_FILE)
    with _caches_lock:
        if path not in _caches:
            _caches[path] = LatticeGreenCache(Path(path))
        return _caches[path]
