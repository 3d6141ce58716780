"""Geometry of Z_n^d, the 1/2-lazy walk kernel and replicate observables."""

from .geometry import TorusGeometry, TorusPoint
from .rng import RandomSource
from .walk import (
    CENSORED,
    MAX_WALKS,
    Censored,
    ReplicateObservation,
    iter_positions,
    lazy_step,
    run_replicate,
    sample_hitting_time,
    sample_uniform_point,
    trajectory,
    walk_visits,
)

__all__ = [
    "TorusGeometry",
    "TorusPoint",
    "RandomSource",
    "ReplicateObservation",
    "Censored",
    "CENSORED",
    "MAX_WALKS",
    "lazy_step",
    "sample_uniform_point",
    "trajectory",
    "iter_positions",
    "walk_visits",
    "run_replicate",
    "sample_hitting_time",
]
