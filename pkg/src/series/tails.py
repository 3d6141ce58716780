"""Exact and asymptotic survival functions Pr(tau(0, xi) > t) of the lazy walk started uniformly."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from src.config.configuration import Configuration
from src.config.logger import get_logger
from src.series.pole_sum import PoleSum, pole_sum_of_f
from src.series.roots import RootSet, TailCoefficient, coefficient_at, find_roots
from src.spectral.green import GreenTables, cached_green_tables, two_point_f
from src.torus.geometry import TorusGeometry, TorusPoint

logger = get_logger(__name__)

CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class TailDistribution:
    """tail(t) = sum_i a_i gamma_i^{-t-1} for the hitting time of {0, xi}."""

    geom: TorusGeometry
    xi: TorusPoint
    pole_sum: PoleSum
    roots: RootSet

    @property
    def alpha0(self) -> float:
        return self.roots.alpha0

    def coefficient(self, t: int) -> TailCoefficient:
        return coefficient_at(self.roots, t)

    def tail(self, t: int) -> float:
        value = self.coefficient(t).value
        if 0.0 <= value <= 1.0:
            return value
        if -CLAMP_SLACK <= value < 0.0:
            return 0.0
        if 1.0 < value <= 1.0 + CLAMP_SLACK:
            return 1.0
        logger.warning(f"tail({t}) = {value!r} for xi={self.xi.coords} lies outside [0, 1]")
        return value

    def mean_hitting_time(self) -> float:
        """E tau(0, xi) = sum_t tail(t) = sum_i a_i / (gamma_i - 1)."""
        return math.fsum((self.roots.weights / self.roots.shifts).tolist())


def build_tail_distribution(
    geom: TorusGeometry,
    xi: TorusPoint,
    config: Optional[Configuration] = None,
) -> TailDistribution:
    """Roots and weights for f_hat = f = f_n(xi; .) and alpha_0 = n^{-d}."""
    geom.validate(xi)
    ps = pole_sum_of_f(xi, geom, config=config)
    roots = find_roots(ps, 1.0 / geom.volume, tolerance=config.root_tolerance if config else None)
    return TailDistribution(geom=geom, xi=xi, pole_sum=ps, roots=roots)


@lru_cache(maxsize=4096)
def _cached_distribution(geom: TorusGeometry, canonical: tuple[int, ...]) -> TailDistribution:
    return build_tail_distribution(geom, TorusPoint(canonical))


def tail_distribution(geom: TorusGeometry, xi: TorusPoint) -> TailDistribution:
    """Shared distribution for the orbit of ``xi``; the tail only depends on the orbit."""
    geom.validate(xi)
    return _cached_distribution(geom, geom.canonical(xi))


def exact_tail(geom: TorusGeometry, xi: TorusPoint, t: int) -> float:
    """Pr(tau(0, xi) > t) for a walk with uniform start."""
    return tail_distribution(geom, xi).tail(t)


def asymptotic_tail(
    geom: TorusGeometry,
    xi: TorusPoint,
    t: int,
    tables: Optional[GreenTables] = None,
    config: Optional[Configuration] = None,
) -> float:
    """e^{-u/f} (1 + (u/N)(f'/f^3 + 1/(2 f^2)) - f'/(N f^2)) with u = (t+1)/N, N = n^d."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    tables = tables or cached_green_tables(geom)
    f, fprime = two_point_f(xi, geom, tables, config)
    volume = float(geom.volume)
    u = (t + 1) / volume
    correction = (u / volume) * (fprime / f**3 + 0.5 / f**2) - fprime / (volume * f**2)
    return math.exp(-u / f) * (1.0 + correction)
