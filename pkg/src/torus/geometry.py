"""Geometry of the discrete torus Z_n^d: points, the row-major vertex index and
hyperoctahedral orbits."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from src.exceptions import BudgetExceeded, InvalidPoint


@dataclass(frozen=True)
class TorusPoint:
    """A vertex of Z_n^d; coordinates are always reduced mod n."""

    coords: tuple[int, ...]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def is_origin(self) -> bool:
        return not any(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.int64)


@dataclass(frozen=True)
class TorusGeometry:
    """Dimension ``d`` and side length ``n`` of Z_n^d."""

    d: int
    n: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"side length must be an integer >= 2, got {self.n}")

    @property
    def volume(self) -> int:
        """Number of vertices, n^d."""
        return self.n**self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @cached_property
    def strides(self) -> np.ndarray:
        """Row-major strides: index = sum_j coords_j * n^(d-1-j)."""
        return np.array([self.n ** (self.d - 1 - j) for j in range(self.d)], dtype=np.int64)

    def check_budget(self, max_vertices: int) -> None:
        if self.volume > max_vertices:
            raise BudgetExceeded(
                f"n^d = {self.n}^{self.d} = {self.volume} exceeds the vertex budget {max_vertices}"
            )

    def require_theory_dimension(self) -> None:
        if self.d < 3:
            raise ValueError(f"closed-form quantities need d >= 3, got d={self.d}")

    # -- points -------------------------------------------------------------------

    def point(self, coords: Iterable[int], strict: bool = False) -> TorusPoint:
        """Build a TorusPoint.

        Args:
            coords: d integer coordinates.
            strict: reject coordinates outside [0, n) instead of reducing them mod n.
        """
        values = tuple(int(c) for c in coords)
        if len(values) != self.d:
            raise InvalidPoint(f"expected {self.d} coordinates, got {len(values)}")
        if strict and any(c < 0 or c >= self.n for c in values):
            raise InvalidPoint(f"coordinates {values} are outside [0, {self.n})")
        return TorusPoint(tuple(c % self.n for c in values))

    @property
    def origin(self) -> TorusPoint:
        return TorusPoint((0,) * self.d)

    def validate(self, p: TorusPoint) -> None:
        if len(p.coords) != self.d or any(c < 0 or c >= self.n for c in p.coords):
            raise InvalidPoint(f"{p.coords} is not a vertex of Z_{self.n}^{self.d}")

    def index_of(self, p: TorusPoint | Sequence[int]) -> int:
        coords = p.coords if isinstance(p, TorusPoint) else tuple(p)
        return int(np.dot(np.asarray(coords, dtype=np.int64) % self.n, self.strides))

    def point_of(self, index: int) -> TorusPoint:
        if not 0 <= index < self.volume:
            raise InvalidPoint(f"vertex index {index} outside [0, {self.volume})")
        coords = []
        for stride in self.strides:
            q, index = divmod(int(index), int(stride))
            coords.append(q)
        return TorusPoint(tuple(coords))

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Row-major indices of an (m, d) integer array of coordinates."""
        return (np.asarray(coords, dtype=np.int64) % self.n) @ self.strides

    def coordinate_grids(self) -> list[np.ndarray]:
        """Broadcastable per-axis index arrays (``np.ogrid`` style) over the full torus."""
        return list(np.ogrid[tuple(slice(0, self.n) for _ in range(self.d))])

    def norm(self, p: TorusPoint, ord: float = 2) -> float:
        """Torus distance ||p||_ord with per-coordinate min(|v_j|, n - |v_j|)."""
        wrapped = [min(c % self.n, self.n - c % self.n) for c in p.coords]
        if ord == np.inf:
            return float(max(wrapped))
        return float(sum(w**ord for w in wrapped) ** (1.0 / ord))

    def negate(self, p: TorusPoint) -> TorusPoint:
        return TorusPoint(tuple((-c) % self.n for c in p.coords))

    # -- hyperoctahedral symmetry -------------------------------------------------

    def canonical(self, p: TorusPoint | Sequence[int]) -> tuple[int, ...]:
        """Orbit representative: folded coordinates min(c, n - c), sorted ascending."""
        coords = p.coords if isinstance(p, TorusPoint) else tuple(p)
        return tuple(sorted(min(c % self.n, self.n - c % self.n) for c in coords))

    def orbit_size(self, canonical: Sequence[int]) -> int:
        signs = 1
        for c in canonical:
            if c != 0 and 2 * c != self.n:
                signs *= 2
        perms = math.factorial(self.d)
        for mult in Counter(canonical).values():
            perms //= math.factorial(mult)
        return signs * perms

    def orbits(self) -> list[tuple[tuple[int, ...], int]]:
        """All orbit representatives with their sizes; the sizes sum to n^d."""
        half = self.n // 2
        return [
            (rep, self.orbit_size(rep))
            for rep in itertools.combinations_with_replacement(range(half + 1), self.d)
        ]
