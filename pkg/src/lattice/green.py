"""Public entry points for the infinite-lattice Green function G and its derivative G'."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from src.config.configuration import Configuration
from src.config.logger import get_logger
from src.config.methods import DEFAULT_LATTICE_GREEN_METHOD, LatticeGreenMethod
from src.lattice.builder import build_solver
from src.lattice.cache import CacheEntry, LatticeGreenCache, get_lattice_cache
from src.lattice.solver import (
    LatticeEstimate,
    LatticeGreenSolver,
    canonical_xi,
    require_deriv_dimension,
    require_green_dimension,
)

logger = get_logger(__name__)


def _resolve(
    method: LatticeGreenMethod | str | None,
    solver: Optional[LatticeGreenSolver],
    config: Optional[Configuration],
) -> LatticeGreenSolver:
    if solver is not None:
        return solver
    return build_solver(method or DEFAULT_LATTICE_GREEN_METHOD, config)


def _cache_for(cache: LatticeGreenCache | bool | None, config: Optional[Configuration]) -> Optional[LatticeGreenCache]:
    if cache is False:
        return None
    if cache is None or cache is True:
        return get_lattice_cache(config)
    return cache


def lattice_green(
    xi: Sequence[int],
    d: int,
    method: LatticeGreenMethod | str | None = None,
    solver: Optional[LatticeGreenSolver] = None,
    cache: LatticeGreenCache | bool | None = None,
    config: Optional[Configuration] = None,
) -> LatticeEstimate:
    """G(xi) for the 1/2-lazy walk on Z^d, with an error bound.

    Args:
        xi: Integer lattice point; only its canonical form (sorted absolute values) matters.
        d: Dimension, at least 3.
        method: Solver selection; extrapolation of the torus values by default.
        solver: A prepared solver, overriding ``method``.
        cache: A cache instance, ``False`` to bypass caching, or ``None`` for the
            process-wide cache under ``cache_dir``.
        config: Runtime configuration.
    """
    require_green_dimension(d)
    key = canonical_xi(xi, d)
    solver = _resolve(method, solver, config)
    store = _cache_for(cache, config)
    if store is not None:
        hit = store.get(d, key, solver.method.value)
        if hit is not None and hit.green is not None:
            return LatticeEstimate(hit.green, hit.green_bound, hit.method, hit.radius)

    estimate = solver.green(key, d)
    if store is not None:
        store.put(
            CacheEntry(
                d=d, xi=key, method=estimate.method, green=estimate.value,
                green_bound=estimate.bound, radius=estimate.radius,
            )
        )
    return estimate


def lattice_green_deriv(
    xi: Sequence[int],
    d: int,
    method: LatticeGreenMethod | str | None = None,
    solver: Optional[LatticeGreenSolver] = None,
    cache: LatticeGreenCache | bool | None = None,
    config: Optional[Configuration] = None,
) -> LatticeEstimate:
    """G'(xi) = sum_t t Pr_0(S_t = xi); finite only for d >= 5."""
    require_deriv_dimension(d)
    key = canonical_xi(xi, d)
    solver = _resolve(method, solver, config)
    store = _cache_for(cache, config)
    if store is not None:
        hit = store.get(d, key, solver.method.value)
        if hit is not None and hit.green_deriv is not None:
            return LatticeEstimate(hit.green_deriv, hit.green_deriv_bound, hit.method, hit.radius)

    estimate = solver.green_deriv(key, d)
    if store is not None:
        store.put(
            CacheEntry(
                d=d, xi=key, method=estimate.method, green_deriv=estimate.value,
                green_deriv_bound=estimate.bound, radius=estimate.radius,
            )
        )
    return estimate


def lazy_green_relation(g_star: float, g_star_prime: float, eps: float) -> tuple[float, float]:
    """(G_eps, G_eps') of the eps-lazy walk from the simple-walk values (G_*, G_*')."""
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"laziness must lie in [0, 1), got {eps}")
    scale = 1.0 - eps
    return g_star / scale, eps * g_star / scale**2 + g_star_prime / scale**2


def phi_d(x: np.ndarray | Sequence[float]) -> np.ndarray | float:
    """d / sum_j sin^2(pi x_j), the Fourier symbol of G; ``x`` has the dimension last."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    with np.errstate(divide="ignore"):
        value = d / np.sum(np.sin(np.pi * x) ** 2, axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def green_square_sum(
    d: int,
    method: LatticeGreenMethod | str | None = None,
    cache: LatticeGreenCache | bool | None = None,
    config: Optional[Configuration] = None,
) -> LatticeEstimate:
    """sum_xi G(xi)^2 over Z^d, equal to G(0) + G'(0) for d >= 5."""
    require_deriv_dimension(d)
    origin = (0,) * d
    green = lattice_green(origin, d, method=method, cache=cache, config=config)
    deriv = lattice_green_deriv(origin, d, method=method, cache=cache, config=config)
    return LatticeEstimate(
        value=green.value + deriv.value,
        bound=green.bound + deriv.bound,
        method=green.method,
        radius=max(green.radius, deriv.radius),
    )
