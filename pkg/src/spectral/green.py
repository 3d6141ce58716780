"""Torus Green's functions g_n, g_n' and the two-point functions f_n, f_n'.

All tables are indexed by xi with shape (n,)*d in row-major vertex order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np
import scipy.fft

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger, log_structured
from src.exceptions import FloorViolation, PoleProximity
from src.spectral.eigen import EigenTable, axis_sin2, build_eigen_table, cached_eigen_table
from src.torus.geometry import TorusGeometry, TorusPoint
from src.utils.decorators import log_io

logger = get_logger(__name__)

POLE_TOLERANCE = 1e-12
IMAG_TOLERANCE = 1e-10
NAIVE_MAX_N = 5


@dataclass(frozen=True)
class GreenTables:
    geom: TorusGeometry
    eig: EigenTable
    g: np.ndarray
    gprime: np.ndarray

    @property
    def g0(self) -> float:
        return float(self.g.flat[0])

    @property
    def gprime0(self) -> float:
        return float(self.gprime.flat[0])

    def at(self, xi: TorusPoint) -> tuple[float, float]:
        self.geom.validate(xi)
        return float(self.g[xi.coords]), float(self.gprime[xi.coords])


def _weights(eig: EigenTable) -> tuple[np.ndarray, np.ndarray]:
    """{1/lambda} and {(1 - lambda)/lambda^2}, zeroed at v = 0."""
    lam = np.array(eig.lam, dtype=np.float64)
    lam.flat[0] = 1.0
    inv = 1.0 / lam
    inv.flat[0] = 0.0
    inv2 = (1.0 - lam) * inv * inv
    inv2.flat[0] = 0.0
    return inv, inv2


def _cosine_transform(weights: np.ndarray, workers: int) -> np.ndarray:
    """sum_v W(v) cos(2 pi <xi, v>/n) for a W even in every coordinate.

    One length-n FFT per axis; the imaginary part of every pass must vanish.
    """
    out = weights
    for axis in range(weights.ndim):
        spectrum = scipy.fft.fft(out, axis=axis, workers=workers)
        scale = max(1.0, float(np.max(np.abs(spectrum.real))))
        leak = float(np.max(np.abs(spectrum.imag))) / scale
        assert leak < IMAG_TOLERANCE, f"imaginary residue {leak:.3e} after axis {axis}"
        out = spectrum.real
    return out


def _naive_transform(weights: np.ndarray, geom: TorusGeometry) -> np.ndarray:
    points = np.indices(geom.shape).reshape(geom.d, -1).T
    phase = (points @ points.T) % geom.n
    cos_table = np.cos(2.0 * np.pi * np.arange(geom.n) / geom.n)
    return (cos_table[phase] @ weights.reshape(-1)).reshape(geom.shape)


@log_io
def build_green_tables(
    geom: TorusGeometry,
    eig: Optional[EigenTable] = None,
    method: str = "fft",
    config: Optional[Configuration] = None,
) -> GreenTables:
    """Tables of g_n(xi) and g_n'(xi) for every xi.

    Args:
        geom: Torus.
        eig: Eigenvalue table, built when omitted.
        method: ``"fft"`` (dimension-wise transforms) or ``"naive"`` (direct O(n^{2d})
            sum, only for n <= 5).
        config: Runtime configuration; the process default when omitted.

    Returns:
        GreenTables with read-only arrays.
    """
    config = config or get_configuration()
    geom.check_budget(config.max_vertices)
    if geom.d < 3:
        logger.debug(f"building Green tables for d={geom.d}; theory formulas need d >= 3")
    eig = eig or build_eigen_table(geom)
    inv, inv2 = _weights(eig)

    if method == "fft":
        g = _cosine_transform(inv, config.fft_workers)
        gprime = _cosine_transform(inv2, config.fft_workers)
    elif method == "naive":
        if geom.n > NAIVE_MAX_N:
            raise ValueError(f"naive transform is limited to n <= {NAIVE_MAX_N}")
        g = _naive_transform(inv, geom)
        gprime = _naive_transform(inv2, geom)
    else:
        raise ValueError(f"unknown transform method: {method}")

    g = g / geom.volume
    gprime = gprime / geom.volume
    g.setflags(write=False)
    gprime.setflags(write=False)
    tables = GreenTables(geom=geom, eig=eig, g=g, gprime=gprime)
    log_structured("green_tables_built", {"n": geom.n, "d": geom.d, "g0": tables.g0, "gprime0": tables.gprime0})
    return tables


@lru_cache(maxsize=8)
def cached_green_tables(geom: TorusGeometry) -> GreenTables:
    """Tables for ``geom`` under the process configuration, reused across callers."""
    return build_green_tables(geom, cached_eigen_table(geom))


def phase_cosines(xi: TorusPoint, geom: TorusGeometry) -> np.ndarray:
    """cos(2 pi <xi, v>/n) over all v, via exact integer phases."""
    phase = np.zeros(geom.shape, dtype=np.int64)
    for c, grid in zip(xi.coords, geom.coordinate_grids()):
        phase = phase + c * grid
    cos_table = np.cos(2.0 * np.pi * np.arange(geom.n) / geom.n)
    return cos_table[phase % geom.n]


def green_generating(xi: TorusPoint, z: float, geom: TorusGeometry, eig: Optional[EigenTable] = None) -> float:
    """g_n(xi; z) = n^{-d} sum_{v != 0} cos(2 pi <xi, v>/n) / (1 - z (1 - lambda_v))."""
    geom.validate(xi)
    eig = eig or build_eigen_table(geom)
    denom = 1.0 - z * eig.lam_hat
    denom.flat[0] = 1.0
    closest = float(np.min(np.abs(denom)))
    if closest < POLE_TOLERANCE:
        raise PoleProximity(f"z={z!r} is within {closest:.3e} of a pole of g_n(xi; z)")
    terms = phase_cosines(xi, geom) / denom
    terms.flat[0] = 0.0
    return math.fsum(float(np.sum(chunk)) for chunk in terms) / geom.volume


def green_at(xi: TorusPoint, geom: TorusGeometry) -> tuple[float, float]:
    """(g_n(xi), g_n'(xi)) for one xi by a direct spectral sum.

    The sum runs slice by slice over the first coordinate of v, so memory stays at
    n^{d-1} and no full table is built.
    """
    geom.validate(xi)
    n, d = geom.n, geom.d
    s = axis_sin2(n)
    cos_table = np.cos(2.0 * np.pi * np.arange(n) / n)

    rest_sum = np.zeros((n,) * (d - 1))
    rest_phase = np.zeros((n,) * (d - 1), dtype=np.int64)
    for j, c in enumerate(xi.coords[1:]):
        shape = [1] * (d - 1)
        shape[j] = n
        rest_sum = rest_sum + s.reshape(shape)
        rest_phase = rest_phase + (c * np.arange(n)).reshape(shape)

    g_parts, gprime_parts = [], []
    for v1 in range(n):
        lam = (s[v1] + rest_sum) / d
        cosines = cos_table[(xi.coords[0] * v1 + rest_phase) % n]
        positive = lam > 0
        inv = np.where(positive, 1.0 / np.where(positive, lam, 1.0), 0.0)
        g_parts.append(float(np.sum(cosines * inv)))
        gprime_parts.append(float(np.sum(cosines * (1.0 - lam) * inv * inv)))
    return math.fsum(g_parts) / geom.volume, math.fsum(gprime_parts) / geom.volume


def two_point_f(
    xi: TorusPoint,
    geom: TorusGeometry,
    tables: GreenTables,
    config: Optional[Configuration] = None,
) -> tuple[float, float]:
    """(f_n(xi), f_n'(xi)) = (g(0) + g(xi), g'(0) + g'(xi)) / 2, with the floor checks."""
    config = config or get_configuration()
    g_xi, gprime_xi = tables.at(xi)
    f = 0.5 * (tables.g0 + g_xi)
    fprime = 0.5 * (tables.gprime0 + gprime_xi)

    if geom.n >= config.floor_min_n and f < config.floor_constant:
        raise FloorViolation(f"f_n({xi.coords}) = {f!r} is below the floor {config.floor_constant}")
    slack = 1e-10 * max(1.0, abs(tables.gprime0))
    if fprime < -slack or fprime > tables.gprime0 + slack:
        raise FloorViolation(f"f_n'({xi.coords}) = {fprime!r} outside [0, g_n'(0) = {tables.gprime0!r}]")
    return f, fprime


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the exact spectral identities of a GreenTables instance."""

    zero_sum: float
    zero_sum_prime: float
    plancherel: float
    symmetry: float
    zero_sum_tolerance: float
    plancherel_tolerance: float = 1e-8
    symmetry_tolerance: float = 1e-12

    @property
    def passed(self) -> bool:
        return (
            self.zero_sum <= self.zero_sum_tolerance
            and self.zero_sum_prime <= self.zero_sum_tolerance
            and self.plancherel <= self.plancherel_tolerance
            and self.symmetry <= self.symmetry_tolerance
        )


def _reflect(table: np.ndarray) -> np.ndarray:
    """table(-xi)."""
    return np.roll(np.flip(table), 1, axis=tuple(range(table.ndim)))


def check_identities(tables: GreenTables) -> IdentityReport:
    geom = tables.geom
    g, gprime = tables.g, tables.gprime
    scale = max(1.0, abs(tables.gprime0))
    square_sum = math.fsum(float(np.sum(chunk * chunk)) for chunk in g)
    target = tables.g0 + tables.gprime0
    report = IdentityReport(
        zero_sum=abs(math.fsum(float(np.sum(chunk)) for chunk in g)),
        zero_sum_prime=abs(math.fsum(float(np.sum(chunk)) for chunk in gprime)) / scale,
        plancherel=abs(square_sum - target) / abs(target),
        symmetry=float(max(np.max(np.abs(g - _reflect(g))), np.max(np.abs(gprime - _reflect(gprime)) / scale)))
        / max(1.0, tables.g0),
        zero_sum_tolerance=1e-10 * geom.n ** (geom.d / 2),
    )
    if not report.passed:
        logger.warning(f"Spectral identity check failed for n={geom.n}, d={geom.d}: {report}")
    return report


def calibrate_floor(d: int, ns: range | list[int] = range(6, 13)) -> float:
    """Half the smallest f_n(xi) over the given side lengths."""
    smallest = math.inf
    for n in ns:
        tables = build_green_tables(TorusGeometry(d, n))
        smallest = min(smallest, 0.5 * (tables.g0 + float(np.min(tables.g))))
    return 0.5 * smallest


def green_table_columns(d: int) -> list[str]:
    return [*(f"xi_{j + 1}" for j in range(d)), "g", "gprime"]


def green_table_rows(tables: GreenTables) -> Iterator[list]:
    """Rows (xi_1..xi_d, g, gprime) in row-major vertex order."""
    points = np.indices(tables.geom.shape).reshape(tables.geom.d, -1).T
    for coords, g, gp in zip(points, tables.g.reshape(-1), tables.gprime.reshape(-1)):
        yield [*(int(c) for c in coords), float(g), float(gp)]
