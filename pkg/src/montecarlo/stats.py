"""Exact integer aggregates of replicate samples and the estimators built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

# Row blocks of at most this many rows keep int64 products of counts <= 2^26 exact.
MAX_BLOCK_ROWS = 2048


@dataclass(frozen=True)
class Histogram:
    """Integer bins [left, left + width) starting at the sample minimum."""

    left: int
    width: int
    counts: tuple[int, ...]

    def rows(self) -> list[tuple[int, int, int]]:
        return [(self.left + i * self.width, self.left + (i + 1) * self.width, c) for i, c in enumerate(self.counts)]


@dataclass(frozen=True)
class CovarianceEntry:
    first: int
    second: int
    value: float
    stderr: float


def _central_moments(sums: Sequence[int], m: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact population central moments (mu2, mu3, mu4) from power sums S1..S4."""
    s1, s2, s3, s4 = (Fraction(s) for s in sums)
    mean = s1 / m
    mu2 = s2 / m - mean**2
    mu3 = s3 / m - 3 * mean * s2 / m + 2 * mean**3
    mu4 = s4 / m - 4 * mean * s3 / m + 6 * mean**2 * s2 / m - 3 * mean**4
    return mu2, mu3, mu4


def build_histogram(values: np.ndarray, bin_width: Optional[int] = None) -> Histogram:
    """Histogram of integer ``values``; width 2 IQR m^{-1/3} (at least 1) unless given."""
    ordered = np.sort(np.asarray(values, dtype=np.int64))
    if ordered.size == 0:
        raise ValueError("cannot bin an empty sample")
    if bin_width is None:
        q25, q75 = np.percentile(ordered, [25, 75])
        bin_width = max(1, int(math.ceil(2.0 * (q75 - q25) * ordered.size ** (-1.0 / 3.0))))
    low = int(ordered[0])
    counts = np.bincount((ordered - low) // bin_width)
    return Histogram(left=low, width=int(bin_width), counts=tuple(int(c) for c in counts))


def cross_sums(columns: np.ndarray) -> list[list[int]]:
    """sum_rows x_i x_j for every pair of columns, exact.

    int64 block products are converted to Python ints before accumulation.
    """
    columns = np.asarray(columns, dtype=np.int64)
    size = columns.shape[1]
    total = [[0] * size for _ in range(size)]
    for start in range(0, columns.shape[0], MAX_BLOCK_ROWS):
        block = columns[start : start + MAX_BLOCK_ROWS]
        product = (block.T @ block).tolist()
        for i in range(size):
            row, acc = product[i], total[i]
            for j in range(size):
                acc[j] += row[j]
    return total


@dataclass(frozen=True)
class ExperimentStats:
    """Aggregates of m replicates; every raw sum is an exact Python int.

    ``columns`` lists the subset masks whose counts were kept; mask 0 is the vacant count.
    """

    reps: int
    ell: int
    t: int
    volume: int
    vacant_power_sums: tuple[int, int, int, int]
    columns: tuple[int, ...]
    column_sums: tuple[int, ...]
    cross: dict[tuple[int, int], int] = field(default_factory=dict)
    cross_fourth: dict[tuple[int, int], float] = field(default_factory=dict)
    histogram: Optional[Histogram] = None

    @property
    def mean(self) -> float:
        return self.vacant_power_sums[0] / self.reps

    @property
    def variance(self) -> float:
        """(S2 - S1^2/m) / (m - 1), divided only once the integer numerator is formed."""
        s1, s2 = self.vacant_power_sums[:2]
        return float(Fraction(self.reps * s2 - s1 * s1, self.reps * (self.reps - 1)))

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.variance / self.reps)

    @property
    def variance_stderr(self) -> float:
        """sqrt((mu4 - (m-3)/(m-1) sigma^4) / m) with exact central moments."""
        m = self.reps
        mu2, _, mu4 = _central_moments(self.vacant_power_sums, m)
        s2 = mu2 * m / (m - 1)
        spread = mu4 - Fraction(m - 3, m - 1) * s2**2
        return math.sqrt(max(0.0, float(spread / m)))

    @property
    def skewness(self) -> float:
        mu2, mu3, _ = _central_moments(self.vacant_power_sums, self.reps)
        return 0.0 if mu2 == 0 else float(mu3) / float(mu2) ** 1.5

    @property
    def excess_kurtosis(self) -> float:
        mu2, _, mu4 = _central_moments(self.vacant_power_sums, self.reps)
        return 0.0 if mu2 == 0 else float(mu4 / mu2**2) - 3.0

    def _sum_of(self, mask: int) -> int:
        try:
            return self.column_sums[self.columns.index(mask)]
        except ValueError:
            raise KeyError(f"subset {mask} was not recorded") from None

    def range_mean(self, mask: int) -> float:
        return self._sum_of(mask) / self.reps

    def covariance_numerator(self, first: int, second: int) -> int:
        """m * sum R^I R^J - sum R^I * sum R^J; zero-sum over J exactly when all J are kept."""
        key = (first, second) if (first, second) in self.cross else (second, first)
        if key not in self.cross:
            raise KeyError(f"cross sum for ({first}, {second}) was not recorded")
        return self.reps * self.cross[key] - self._sum_of(first) * self._sum_of(second)

    def covariance(self, first: int, second: int) -> float:
        return float(Fraction(self.covariance_numerator(first, second), self.reps * (self.reps - 1)))

    def covariance_stderr(self, first: int, second: int) -> float:
        """sqrt((mu22 - cov^2) / m) with mu22 the mean of the squared centred product."""
        key = (first, second) if (first, second) in self.cross_fourth else (second, first)
        cov = self.covariance(first, second)
        return math.sqrt(max(0.0, (self.cross_fourth[key] - cov * cov) / self.reps))

    def covariance_entry(self, first: int, second: int) -> CovarianceEntry:
        return CovarianceEntry(
            first=first,
            second=second,
            value=self.covariance(first, second),
            stderr=self.covariance_stderr(first, second),
        )


def summarize(
    samples: np.ndarray,
    columns: Sequence[int],
    pairs: Sequence[tuple[int, int]],
    ell: int,
    t: int,
    volume: int,
    bin_width: Optional[int] = None,
) -> ExperimentStats:
    """Aggregate an (m, len(columns)) integer sample matrix in replicate order."""
    samples = np.asarray(samples, dtype=np.int64)
    columns = tuple(columns)
    m = samples.shape[0]
    vacant = samples[:, columns.index(0)].tolist()
    power_sums = tuple(sum(v**p for v in vacant) for p in range(1, 5))
    column_sums = tuple(int(s) for s in samples.sum(axis=0, dtype=np.int64))

    products = cross_sums(samples)
    centred = samples.astype(np.float64) - samples.mean(axis=0)
    cross, fourth = {}, {}
    for first, second in pairs:
        i, j = columns.index(first), columns.index(second)
        key = (first, second)
        cross[key] = products[i][j]
        fourth[key] = float(np.mean((centred[:, i] * centred[:, j]) ** 2))
    return ExperimentStats(
        reps=m,
        ell=ell,
        t=t,
        volume=volume,
        vacant_power_sums=power_sums,
        columns=columns,
        column_sums=column_sums,
        cross=cross,
        cross_fourth=fourth,
        histogram=build_histogram(np.asarray(vacant), bin_width),
    )
