"""Rational generating functions of two-point hitting times and their coefficients."""

from .pole_sum import PoleSum, pole_sum_of_f
from .roots import RootSet, TailCoefficient, coefficient_at, companion_roots, find_roots
from .tails import (
    TailDistribution,
    asymptotic_tail,
    build_tail_distribution,
    exact_tail,
    tail_distribution,
)

__all__ = [
    "PoleSum",
    "pole_sum_of_f",
    "RootSet",
    "TailCoefficient",
    "find_roots",
    "coefficient_at",
    "companion_roots",
    "TailDistribution",
    "build_tail_distribution",
    "tail_distribution",
    "exact_tail",
    "asymptotic_tail",
]
