"""Lattice sums of |v|^{-4} and the constants alpha_3, alpha_4 built from them."""

from __future__ import annotations

import itertools
import json
import math
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.special import erfc, polygamma

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger, log_structured
from src.config.methods import BULK_LATTICE_GREEN_METHOD, LatticeSumMethod
from src.exceptions import DimensionUnsupported
from src.lattice.green import lattice_green
from src.utils.decorators import log_io

logger = get_logger(__name__)

CONSTANTS_VERSION = 1
CONSTANTS_FILE = "constants.json"
THETA_CUTOFF = 6
SHELL_RADIUS = 60
FOUR_DIM_EXPONENTS = tuple(range(6, 13))


@dataclass(frozen=True)
class LatticeSum:
    """sum_{v != 0} |v|^{-4} over Z^3, or for d = 4 the slope c of S(n) ~ c log n + b."""

    d: int
    value: float
    bound: float
    method: str
    radius: int
    intercept: Optional[float] = None
    half_range_value: Optional[float] = None


def _integer_points(radius: int, d: int) -> np.ndarray:
    axis = np.arange(-radius, radius + 1)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return grid[np.any(grid != 0, axis=1)]


def theta_inverse_fourth(cutoff: int = THETA_CUTOFF) -> float:
    """sum_{v in Z^3 \\ 0} |v|^{-4} by splitting the Mellin integral at 1.

    With x = pi |v|^2 the sum is pi^2 [ sum x^{-2} Gamma(2, x) + sum x^{1/2} Gamma(-1/2, x)
    + 3/2 ], where Gamma(2, x) = (1 + x) e^{-x} and
    Gamma(-1/2, x) = 2 (x^{-1/2} e^{-x} - sqrt(pi) erfc(sqrt(x))). Terms with
    |v|_inf > cutoff are below e^{-pi cutoff^2}.
    """
    r2 = np.sum(_integer_points(cutoff, 3) ** 2, axis=1).astype(np.float64)
    x = np.pi * r2
    upper = (1.0 + x) * np.exp(-x) / x**2
    gamma_half = 2.0 * (np.exp(-x) / np.sqrt(x) - np.sqrt(np.pi) * erfc(np.sqrt(x)))
    lower = np.sqrt(x) * gamma_half
    return math.pi**2 * (math.fsum(np.sort(upper)) + math.fsum(np.sort(lower)) + 1.5)


def shell_partial_sums(radii: list[int]) -> list[float]:
    """S(R) = sum_{0 < |v| <= R} |v|^{-4} over Z^3 for increasing R."""
    r_max = max(radii)
    r2 = np.sum(_integer_points(r_max, 3) ** 2, axis=1)
    terms = 1.0 / r2.astype(np.float64) ** 2
    return [math.fsum(np.sort(terms[r2 <= r * r])) for r in radii]


def shell_tail_bound(radius: int) -> float:
    """sum_{|v| > R} |v|^{-4} <= int_{|x| > R - sqrt(3)} |x|^{-4} dx = 4 pi / (R - sqrt 3)."""
    return 4.0 * math.pi / (radius - math.sqrt(3.0))


def four_dim_partial_sum(n: int) -> float:
    """S(n) = sum_{0 < |v| <= n} |v|^{-4} over Z^4.

    Jacobi's four-square count r_4(m) = 8 sum_{k | m, 4 !| k} k gives
    S(n) = 8 sum_{k <= n^2, 4 !| k} H(floor(n^2 / k)) / k with
    H(q) = sum_{j <= q} j^{-2} = pi^2/6 - psi_1(q + 1).
    """
    limit = n * n
    k = np.arange(1, limit + 1, dtype=np.int64)
    k = k[k % 4 != 0]
    harmonic = math.pi**2 / 6.0 - polygamma(1, (limit // k) + 1.0)
    return 8.0 * math.fsum(np.sort(harmonic / k))


def _fit_slope(ns: list[int], sums: list[float]) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.log(np.asarray(ns, dtype=np.float64)), np.asarray(sums), 1)
    return float(slope), float(intercept)


@log_io
def lattice_sum_inverse_fourth(d: int, method: LatticeSumMethod | str = LatticeSumMethod.THETA) -> LatticeSum:
    """d = 3: the full lattice sum. d = 4: the log-slope of the truncated sums."""
    method = LatticeSumMethod(method)
    if d == 3:
        if method == LatticeSumMethod.THETA:
            value = theta_inverse_fourth()
            return LatticeSum(d=3, value=value, bound=1e-12, method=method.value, radius=THETA_CUTOFF)
        partial = shell_partial_sums([SHELL_RADIUS])[0]
        tail = shell_tail_bound(SHELL_RADIUS)
        return LatticeSum(d=3, value=partial + 0.5 * tail, bound=0.5 * tail, method=method.value, radius=SHELL_RADIUS)
    if d == 4:
        ns = [2**e for e in FOUR_DIM_EXPONENTS]
        sums = [four_dim_partial_sum(n) for n in ns]
        slope, intercept = _fit_slope(ns, sums)
        half_slope, _ = _fit_slope(ns[len(ns) // 2 :], sums[len(ns) // 2 :])
        logger.info(f"S(n) ~ {slope!r} log n + {intercept!r}; upper-half slope {half_slope!r}")
        return LatticeSum(
            d=4,
            value=slope,
            bound=abs(slope - half_slope),
            method="jacobi",
            radius=ns[-1],
            intercept=intercept,
            half_range_value=half_slope,
        )
    raise DimensionUnsupported(f"the |v|^-4 lattice constant is only used for d in (3, 4), got {d}")


_constants_lock = threading.Lock()


def _constants_path(config: Configuration) -> Path:
    return Path(config.cache_dir) / CONSTANTS_FILE


def _read_constants(path: Path) -> dict:
    if not path.is_file():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        logger.warning(f"Ignoring unreadable constants file {path}")
        return {}
    return data if data.get("version") == CONSTANTS_VERSION else {}


def alpha_d(d: int, config: Optional[Configuration] = None) -> float:
    """alpha_3 = 9 Z / (pi^4 G(0)^2) and alpha_4 = 16 c / (pi^4 G(0)^2).

    Values are cached with their provenance in ``<cache_dir>/constants.json``.
    """
    if d not in (3, 4):
        raise DimensionUnsupported(f"alpha_d is defined for d in (3, 4), got {d}")
    config = config or get_configuration()
    path = _constants_path(config)
    key = f"alpha_{d}"
    with _constants_lock:
        stored = _read_constants(path)
        if key in stored:
            return float(stored[key]["value"])

        lattice_sum = lattice_sum_inverse_fourth(d)
        g0 = lattice_green((0,) * d, d, method=BULK_LATTICE_GREEN_METHOD, config=config)
        prefactor = 9.0 if d == 3 else 16.0
        value = prefactor * lattice_sum.value / (math.pi**4 * g0.value**2)
        stored = stored or {"version": CONSTANTS_VERSION}
        stored[key] = {
            "value": value,
            "lattice_sum": asdict(lattice_sum),
            "green_origin": {"value": g0.value, "bound": g0.bound, "method": g0.method},
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(stored, indent=2, sort_keys=True), encoding="utf-8")
    log_structured("constant_cached", {"name": key, "value": value, "path": str(path)})
    return value


def alpha_provenance(d: int, config: Optional[Configuration] = None) -> dict:
    """Stored provenance for alpha_d, computing it first if needed."""
    config = config or get_configuration()
    alpha_d(d, config)
    return _read_constants(_constants_path(config)).get(f"alpha_{d}", {})


def lattice_ball(radius: int, d: int) -> list[tuple[tuple[int, ...], int]]:
    """Canonical points (sorted non-negative coordinates) of {|xi| <= radius} in Z^d
    with their orbit sizes under the hyperoctahedral group."""
    out = []
    r2 = radius * radius
    for rep in itertools.combinations_with_replacement(range(radius + 1), d):
        if sum(c * c for c in rep) > r2:
            continue
        size = 2 ** sum(1 for c in rep if c)
        size *= math.factorial(d)
        for mult in _multiplicities(rep):
            size //= math.factorial(mult)
        out.append((rep, size))
    return out


def _multiplicities(rep: tuple[int, ...]) -> list[int]:
    counts: dict[int, int] = {}
    for c in rep:
        counts[c] = counts.get(c, 0) + 1
    return list(counts.values())
