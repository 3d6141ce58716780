"""Exact finite-n moments of the vacant set and of the range-intersection counts."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger
from src.series.tails import exact_tail
from src.spectral.green import GreenTables, cached_green_tables
from src.theory.params import CovarianceQuery
from src.theory.theta import theta
from src.torus.geometry import TorusGeometry, TorusPoint
from src.utils.decorators import log_io

logger = get_logger(__name__)


def _origin_tail(geom: TorusGeometry, t: int) -> float:
    geom.require_theory_dimension()
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return exact_tail(geom, geom.origin, t)


def exact_mean_vacant(geom: TorusGeometry, ell: int, t: int) -> float:
    """E V = n^d Pr(tau(0) > t)^ell."""
    return geom.volume * _origin_tail(geom, t) ** ell


def exact_mean_range(geom: TorusGeometry, ell: int, t: int, subset_size: int) -> float:
    """E R^I = n^d a^{ell - |I|} (1 - a)^{|I|} with a = Pr(tau(0) > t)."""
    if not 0 <= subset_size <= ell:
        raise ValueError(f"|I| must lie in [0, {ell}], got {subset_size}")
    a = _origin_tail(geom, t)
    return geom.volume * a ** (ell - subset_size) * (1.0 - a) ** subset_size


def mean_expansion(geom: TorusGeometry, ell: int, t: int, tables: Optional[GreenTables] = None) -> float:
    """n^d e^{-ell u/g} + ell e^{-ell u/g} (u g'/g^3 + u/(2 g^2) - g'/g^2), u = (t+1)/n^d.

    g and g' are the torus values g_n(0), g_n'(0).
    """
    geom.require_theory_dimension()
    tables = tables or cached_green_tables(geom)
    g, gp = tables.g0, tables.gprime0
    u = (t + 1) / geom.volume
    damping = math.exp(-ell * u / g)
    return geom.volume * damping + ell * damping * (u * gp / g**3 + u / (2.0 * g * g) - gp / (g * g))


def _orbit_term(geom: TorusGeometry, rep: tuple[int, ...], size: int, ell: int, t: int, base: float) -> float:
    return size * (exact_tail(geom, TorusPoint(rep), t) ** ell - base)


def _orbit_sum(geom: TorusGeometry, ell: int, t: int, base: float, workers: int) -> float:
    orbits = geom.orbits()
    if workers <= 1 or len(orbits) < 2 * workers:
        return math.fsum(_orbit_term(geom, rep, size, ell, t, base) for rep, size in orbits)
    reps = [rep for rep, _ in orbits]
    sizes = [size for _, size in orbits]
    count = len(orbits)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map preserves input order, so the reduction below is fixed.
        terms = list(
            executor.map(
                _orbit_term, [geom] * count, reps, sizes, [ell] * count, [t] * count, [base] * count,
                chunksize=max(1, count // (4 * workers)),
            )
        )
    return math.fsum(terms)


@log_io
def exact_variance(geom: TorusGeometry, ell: int, t: int, config: Optional[Configuration] = None) -> float:
    """var V = n^d sum_xi (Pr(tau(0, xi) > t)^ell - Pr(tau(0) > t)^{2 ell}).

    The xi-sum runs over hyperoctahedral orbits, one representative each. ``ell = 0``
    gives 0 (no walks, V = n^d).
    """
    if ell == 0:
        return 0.0
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    config = config or get_configuration()
    a = _origin_tail(geom, t)
    return geom.volume * _orbit_sum(geom, ell, t, a ** (2 * ell), config.workers)


def exact_covariance(
    geom: TorusGeometry,
    ell: int,
    t: int,
    query: CovarianceQuery,
    config: Optional[Configuration] = None,
) -> float:
    """cov(R^I, R^J) = sum_m theta_{k,r,m}(a) var V^{(ell - m)} with var V^{(0)} = 0."""
    if query.ell != ell:
        raise ValueError(f"query is over {query.ell} walks, expected {ell}")
    a = _origin_tail(geom, t)
    terms = []
    for m in range(query.k + query.r + 1):
        weight = theta(query.k, query.r, m, a)
        if ell - m <= 0 or weight == 0.0:
            continue
        terms.append(weight * exact_variance(geom, ell - m, t, config))
    return math.fsum(terms)
