"""The 1/2-lazy random walk on Z_n^d and per-replicate observables.

Each step consumes exactly one 64-bit word: bit 0 decides the hold, the top 53 bits
pick one of the 2d directions (index 2j is +e_j, 2j+1 is -e_j). A hold still
consumes its word, so the scalar and vectorised paths read the stream identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from src.config.configuration import get_configuration
from src.config.logger import get_logger
from src.torus.geometry import TorusGeometry, TorusPoint
from src.torus.rng import RandomSource

logger = get_logger(__name__)

MAX_WALKS = 16
WALK_CHUNK = 1 << 16


class Censored:
    """Marker for a hitting time beyond the cap."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CENSORED"

    def __reduce__(self):
        return (Censored, ())


CENSORED = Censored()


@dataclass(frozen=True)
class ReplicateObservation:
    """Vacant count and the range-intersection vector R^I of one replicate.

    ``range_vector[mask]`` is the number of vertices visited by exactly the walks in
    ``mask`` (bit i set means walk i); ``range_vector[0]`` is the vacant count.
    """

    vacant_count: int
    range_vector: tuple[int, ...]
    ell: int
    t: int

    def __post_init__(self):
        if len(self.range_vector) != 1 << self.ell:
            raise ValueError("range vector must have 2^ell entries")
        if self.vacant_count != self.range_vector[0]:
            raise ValueError("vacant count must equal R of the empty set")

    @property
    def total(self) -> int:
        return sum(self.range_vector)


def _direction_table(d: int) -> np.ndarray:
    table = np.zeros((2 * d, d), dtype=np.int64)
    for j in range(d):
        table[2 * j, j] = 1
        table[2 * j + 1, j] = -1
    return table


def _displacements(words: np.ndarray, d: int) -> np.ndarray:
    """Per-step displacement vectors, shape (len(words), d)."""
    hold = RandomSource.hold_bits(words)
    direction = np.minimum((RandomSource.fractions(words) * (2 * d)).astype(np.int64), 2 * d - 1)
    steps = _direction_table(d)[direction]
    steps[hold] = 0
    return steps


def lazy_step(p: TorusPoint, geom: TorusGeometry, rng: RandomSource) -> TorusPoint:
    """One application of the kernel P = I/2 + A/(4d)."""
    step = _displacements(rng.words(1), geom.d)[0]
    return TorusPoint(tuple(int(c) for c in (p.as_array() + step) % geom.n))


def sample_uniform_point(geom: TorusGeometry, rng: RandomSource) -> TorusPoint:
    """A uniform vertex from one word, decomposed in row-major order."""
    return geom.point_of(int(rng.uniform_indices(1, geom.volume)[0]))


def iter_positions(
    start: TorusPoint,
    steps: int,
    geom: TorusGeometry,
    rng: RandomSource,
    chunk: int = WALK_CHUNK,
) -> Iterator[np.ndarray]:
    """X_1..X_steps in blocks of at most ``chunk`` rows, so memory stays O(chunk * d)."""
    if chunk < 1:
        raise ValueError(f"chunk must be >= 1, got {chunk}")
    current = start.as_array()
    remaining = steps
    while remaining > 0:
        size = min(chunk, remaining)
        block = (np.cumsum(_displacements(rng.words(size), geom.d), axis=0) + current) % geom.n
        yield block
        current = block[-1]
        remaining -= size


def trajectory(start: TorusPoint, steps: int, geom: TorusGeometry, rng: RandomSource) -> np.ndarray:
    """Positions X_0..X_steps as an int array of shape (steps + 1, d)."""
    path = np.empty((steps + 1, geom.d), dtype=np.int64)
    path[0] = start.as_array()
    row = 1
    for block in iter_positions(start, steps, geom, rng):
        path[row : row + len(block)] = block
        row += len(block)
    return path


def walk_visits(geom: TorusGeometry, t: int, rng: RandomSource, chunk: int = WALK_CHUNK) -> np.ndarray:
    """Boolean vertex mask of X_0..X_t for one walk from a uniform start."""
    start = sample_uniform_point(geom, rng)
    visited = np.zeros(geom.volume, dtype=bool)
    visited[geom.index_of(start)] = True
    for block in iter_positions(start, t, geom, rng, chunk):
        visited[geom.indices_of(block)] = True
    return visited


def run_replicate(
    geom: TorusGeometry,
    ell: int,
    t: int,
    rng: RandomSource,
    max_vertices: int | None = None,
) -> ReplicateObservation:
    """Simulate ``ell`` independent walks from uniform starts for ``t`` steps.

    Walk i draws from ``rng.child(i)``: its start word first, then one word per step.
    Longer horizons therefore extend the same trajectories.
    """
    if not 1 <= ell <= MAX_WALKS:
        raise ValueError(f"ell must be in [1, {MAX_WALKS}], got {ell}")
    if t < 0:
        raise ValueError(f"time horizon must be >= 0, got {t}")
    geom.check_budget(max_vertices if max_vertices is not None else get_configuration().max_vertices)

    masks = np.zeros(geom.volume, dtype=np.uint16)
    for i in range(ell):
        visited = walk_visits(geom, t, rng.child(i))
        masks[visited] |= np.uint16(1 << i)

    counts = np.bincount(masks, minlength=1 << ell)
    range_vector = tuple(int(c) for c in counts)
    return ReplicateObservation(vacant_count=range_vector[0], range_vector=range_vector, ell=ell, t=t)


def sample_hitting_time(
    geom: TorusGeometry,
    targets: Iterable[TorusPoint],
    cap: int,
    rng: RandomSource,
) -> int | Censored:
    """First t with X_t in ``targets`` for a walk started uniformly, or CENSORED past ``cap``."""
    target_list = list(targets)
    if not 1 <= len(target_list) <= 2:
        raise ValueError("targets must hold one or two points")
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    target_index = np.array([geom.index_of(p) for p in target_list], dtype=np.int64)

    position = sample_uniform_point(geom, rng)
    if geom.index_of(position) in target_index:
        return 0

    elapsed = 0
    chunk = 64
    current = position.as_array()
    while elapsed < cap:
        size = min(chunk, cap - elapsed)
        path = (np.cumsum(_displacements(rng.words(size), geom.d), axis=0) + current) % geom.n
        hits = np.flatnonzero(np.isin(geom.indices_of(path), target_index))
        if hits.size:
            return elapsed + int(hits[0]) + 1
        elapsed += size
        current = path[-1]
        chunk = min(chunk * 2, 1 << 16)
    return CENSORED

