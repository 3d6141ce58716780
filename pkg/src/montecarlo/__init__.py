"""Monte Carlo estimation of vacant-set and range-intersection statistics."""

from .config import ExperimentConfig
from .runner import HistogramSummary, collect_samples, covariance_matrix, histogram, run_experiment, simulate_shard
from .stats import CovarianceEntry, ExperimentStats, Histogram, build_histogram, cross_sums, summarize

__all__ = [
    "ExperimentConfig",
    "ExperimentStats",
    "Histogram",
    "HistogramSummary",
    "CovarianceEntry",
    "build_histogram",
    "cross_sums",
    "summarize",
    "simulate_shard",
    "collect_samples",
    "run_experiment",
    "covariance_matrix",
    "histogram",
]
