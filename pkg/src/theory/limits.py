"""n -> infinity limits: nu_d, the covariance limit and the scaling factor h_d(n)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger, log_structured
from src.config.methods import BULK_LATTICE_GREEN_METHOD
from src.exceptions import ConfigError, DimensionUnsupported, NonConvergence
from src.lattice.green import lattice_green, lattice_green_deriv
from src.lattice.quadrature import sphere_area
from src.lattice.sums import alpha_d, lattice_ball
from src.theory.params import AsymptoticParams, CovarianceQuery
from src.theory.theta import theta

logger = get_logger(__name__)


@dataclass(frozen=True)
class NuEstimate:
    value: float
    bound: float
    radius: int


def origin_green(d: int, config: Optional[Configuration] = None) -> float:
    """G(0) of the lazy walk on Z^d, as used by every limit formula."""
    return lattice_green((0,) * d, d, method=BULK_LATTICE_GREEN_METHOD, config=config).value


def scaling_factor(n: int, d: int) -> float:
    """h_d(n): n for d = 3, log n for d = 4, 1 for d >= 5."""
    if d < 3:
        raise DimensionUnsupported(f"h_d(n) is defined for d >= 3, got {d}")
    if d == 3:
        return float(n)
    if d == 4:
        return math.log(n)
    return 1.0


def variance_scale(n: int, d: int) -> float:
    """n^d h_d(n), the order of var V_n(t)."""
    return float(n) ** d * scaling_factor(n, d)


def time_from_density(u: float, n: int, d: int) -> int:
    """t with (t + 1) / n^d = u up to rounding; ties go to the even integer."""
    t = round(u * n**d) - 1
    if t < 0:
        raise ValueError(f"density u={u} is too small for n={n}, d={d}")
    return t


def _ball_greens(radius: int, d: int, config: Configuration) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(G values, orbit sizes, Euclidean norms) over canonical points with |xi| <= radius."""
    reps = lattice_ball(radius, d)
    greens = np.array(
        [lattice_green(rep, d, method=BULK_LATTICE_GREEN_METHOD, config=config).value for rep, _ in reps]
    )
    sizes = np.array([size for _, size in reps], dtype=np.float64)
    norms = np.sqrt(np.array([sum(c * c for c in rep) for rep, _ in reps], dtype=np.float64))
    return greens, sizes, norms


def nu_high_d_estimate(x: float, d: int, config: Optional[Configuration] = None) -> NuEstimate:
    """nu_d(x) for d >= 5 with the truncation bound and the radius that met the tolerance.

    Summand of xi: e^y - 1 - y + x G^2 (G - [xi = 0]) / (G0^2 (G0 + G)) with
    y = x G / (G0 + G). Its quadratic part x^2 G^2 / (2 G0^2) is summed exactly through
    sum_xi G(xi)^2 = G0 + G'(0); the cubic remainder decays like |xi|^{6-3d} and its tail
    past the ball is bounded from the outermost shell.
    """
    if d < 5:
        raise DimensionUnsupported(f"nu_high_d needs d >= 5, got {d}")
    if x < 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    config = config or get_configuration()
    if x == 0:
        return NuEstimate(value=0.0, bound=0.0, radius=0)
    if not config.nu_radii:
        raise ConfigError("nu_radii must list at least one radius")

    origin = (0,) * d
    g0 = origin_green(d, config)
    g0_prime = lattice_green_deriv(origin, d, method=BULK_LATTICE_GREEN_METHOD, config=config).value
    quadratic = x * x / (2.0 * g0 * g0)
    damping = math.exp(-x)

    last = None
    for radius in config.nu_radii:
        greens, sizes, norms = _ball_greens(radius, d, config)
        y = x * greens / (g0 + greens)
        indicator = (norms == 0).astype(np.float64)
        term = np.expm1(y) - y + x * greens**2 * (greens - indicator) / (g0 * g0 * (g0 + greens))
        remainder = term - quadratic * greens**2
        shell = norms > radius - 1
        outer = float(np.max(np.abs(remainder[shell]))) if shell.any() else 0.0
        tail = 2.0 * sphere_area(d) * outer * radius**d / (2 * d - 6)

        body = math.fsum((sizes * remainder).tolist())
        value = damping * (body + quadratic * (g0 + g0_prime))
        last = NuEstimate(value=value, bound=damping * tail, radius=radius)
        logger.debug(f"nu_{d}({x!r}) at R={radius}: {value!r} +- {last.bound:.3e}")
        if last.bound <= config.nu_tolerance:
            log_structured("nu_converged", {"d": d, "x": x, "value": value, "bound": last.bound, "radius": radius})
            return last
    raise NonConvergence(
        f"nu_{d}({x!r}) tail bound {last.bound:.3e} exceeds {config.nu_tolerance} at radius {last.radius}"
    )


def nu_high_d(x: float, d: int, config: Optional[Configuration] = None) -> float:
    return nu_high_d_estimate(x, d, config).value


def nu_low_d(x: float, d: int, config: Optional[Configuration] = None) -> float:
    """alpha_d x^2 e^{-x} / 2 for d in (3, 4)."""
    if d not in (3, 4):
        raise DimensionUnsupported(f"nu_low_d needs d in (3, 4), got {d}")
    if x < 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    return 0.5 * alpha_d(d, config) * x * x * math.exp(-x)


def nu_d(x: float, d: int, config: Optional[Configuration] = None) -> float:
    """nu_d(x) through the formula matching the dimension."""
    return nu_low_d(x, d, config) if d in (3, 4) else nu_high_d(x, d, config)


def covariance_limit(
    params: AsymptoticParams,
    query: CovarianceQuery,
    config: Optional[Configuration] = None,
) -> float:
    """sum_m theta_{k,r,m}(e^{-u/G0}) nu_d(2 (ell - m) u / G0), with nu := 0 when ell = m."""
    if query.ell != params.ell:
        raise ValueError(f"query is over {query.ell} walks, parameters over {params.ell}")
    g0 = origin_green(params.d, config)
    a = math.exp(-params.u / g0)
    terms = []
    for m in range(query.k + query.r + 1):
        walks = params.ell - m
        if walks <= 0:
            continue
        weight = theta(query.k, query.r, m, a)
        if weight != 0.0:
            terms.append(weight * nu_d(params.density_argument(g0, walks), params.d, config))
    return math.fsum(terms)


def mean_limit(params: AsymptoticParams, subset_size: int = 0, config: Optional[Configuration] = None) -> float:
    """lim n^{-d} E R^I = e^{-(ell - |I|) u / G0} (1 - e^{-u / G0})^{|I|}."""
    if not 0 <= subset_size <= params.ell:
        raise ValueError(f"|I| must lie in [0, {params.ell}], got {subset_size}")
    a = math.exp(-params.u / origin_green(params.d, config))
    return a ** (params.ell - subset_size) * (1.0 - a) ** subset_size
