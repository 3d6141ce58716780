"""Replicate orchestration: deterministic sharded execution and the derived summaries."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger, log_structured
from src.montecarlo.config import FULL_MATRIX_MAX_ELL, ExperimentConfig
from src.montecarlo.stats import CovarianceEntry, ExperimentStats, Histogram, build_histogram, summarize
from src.torus.rng import RandomSource
from src.torus.walk import run_replicate
from src.utils.decorators import log_io

logger = get_logger(__name__)

HISTOGRAM_MIN_REPS = 100


@dataclass(frozen=True)
class HistogramSummary:
    histogram: Histogram
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float


def _columns_for(pairs: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    return tuple(sorted({0, *(mask for pair in pairs for mask in pair)}))


def simulate_shard(
    cfg: ExperimentConfig,
    start: int,
    stop: int,
    columns: tuple[int, ...],
    max_vertices: int,
) -> np.ndarray:
    """Replicates start..stop-1 as rows of the kept range-vector columns.

    Replicate i always reads RandomSource(seed, i), whichever process runs it.
    """
    geom, t = cfg.geom, cfg.steps
    out = np.empty((stop - start, len(columns)), dtype=np.int64)
    for row, index in enumerate(range(start, stop)):
        observation = run_replicate(geom, cfg.ell, t, RandomSource(cfg.seed, index), max_vertices)
        out[row] = [observation.range_vector[mask] for mask in columns]
    return out


def collect_samples(
    cfg: ExperimentConfig,
    columns: tuple[int, ...],
    config: Optional[Configuration] = None,
) -> np.ndarray:
    """(m, len(columns)) sample matrix in replicate order, for any worker count."""
    config = config or get_configuration()
    cfg.geom.check_budget(config.max_vertices)
    workers = min(cfg.workers, cfg.reps)
    if workers <= 1:
        return simulate_shard(cfg, 0, cfg.reps, columns, config.max_vertices)

    bounds = np.linspace(0, cfg.reps, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(simulate_shard, cfg, int(lo), int(hi), columns, config.max_vertices)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        # Shards are joined in submission order, not completion order.
        shards = [future.result() for future in futures]
    return np.concatenate(shards, axis=0)


@log_io
def run_experiment(
    cfg: ExperimentConfig,
    pairs: Optional[Sequence[tuple[int, int]]] = None,
    config: Optional[Configuration] = None,
) -> ExperimentStats:
    """Run ``cfg.reps`` replicates and aggregate V and the requested R^I cross sums."""
    pairs = list(pairs) if pairs is not None else cfg.covariance_pairs()
    columns = _columns_for(pairs)
    samples = collect_samples(cfg, columns, config)
    stats = summarize(
        samples,
        columns,
        pairs,
        ell=cfg.ell,
        t=cfg.steps,
        volume=cfg.geom.volume,
        bin_width=cfg.bin_width,
    )
    log_structured(
        "experiment_finished",
        {
            "n": cfg.n,
            "d": cfg.d,
            "ell": cfg.ell,
            "t": cfg.steps,
            "reps": cfg.reps,
            "seed": cfg.seed,
            "mean": stats.mean,
            "variance": stats.variance,
        },
    )
    return stats


def covariance_matrix(
    cfg: ExperimentConfig,
    pairs: Optional[Sequence[tuple[int, int]]] = None,
    stats: Optional[ExperimentStats] = None,
    config: Optional[Configuration] = None,
) -> list[CovarianceEntry]:
    """Sample covariances of (R^I, R^J) with standard errors.

    With ``pairs`` unset every pair of the 2^ell subsets is used, which needs ell <= 8.
    """
    if pairs is None:
        if cfg.ell > FULL_MATRIX_MAX_ELL:
            raise ValueError(f"the full covariance matrix is limited to ell <= {FULL_MATRIX_MAX_ELL}")
        size = 1 << cfg.ell
        pairs = [(i, j) for i in range(size) for j in range(size)]
    if stats is None or any((i, j) not in stats.cross and (j, i) not in stats.cross for i, j in pairs):
        stats = run_experiment(cfg, pairs, config)
    return [stats.covariance_entry(i, j) for i, j in pairs]


def histogram(
    cfg: ExperimentConfig,
    stats: Optional[ExperimentStats] = None,
    config: Optional[Configuration] = None,
) -> HistogramSummary:
    """Binned vacant counts and moment summary of the raw sample."""
    if cfg.reps < HISTOGRAM_MIN_REPS:
        raise ValueError(f"histograms need at least {HISTOGRAM_MIN_REPS} replicates, got {cfg.reps}")
    stats = stats or run_experiment(cfg, [(0, 0)], config)
    binned = stats.histogram
    if cfg.bin_width is not None and binned.width != cfg.bin_width:
        samples = collect_samples(cfg, (0,), config)
        binned = build_histogram(samples[:, 0], cfg.bin_width)
    return HistogramSummary(
        histogram=binned,
        mean=stats.mean,
        variance=stats.variance,
        skewness=stats.skewness,
        excess_kurtosis=stats.excess_kurtosis,
    )
