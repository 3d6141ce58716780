"""Pole-sum form c + sum_i alpha_i / (zeta_i - z) of the two-point generating function.

Poles are stored through their excess e_i = zeta_i - 1 = lambda_i / (1 - lambda_i), so the
shifted coordinate w = z - 1 keeps full relative precision near z = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger
from src.exceptions import DegenerateSpectrum
from src.spectral.eigen import EigenTable, cached_eigen_table
from src.spectral.green import phase_cosines
from src.torus.geometry import TorusGeometry, TorusPoint

logger = get_logger(__name__)

# Groups whose aggregated cosine weight falls below this share of the group size are empty.
ZERO_WEIGHT = 1e-12


@dataclass(frozen=True)
class PoleSum:
    """f(z) = c + sum_i weights_i / (zeta_i - z) with zeta_i = 1 + excess_i increasing."""

    constant: float
    weights: np.ndarray
    excess: np.ndarray

    def __post_init__(self):
        if self.constant < 0:
            raise ValueError(f"constant term must be >= 0, got {self.constant}")
        if self.weights.shape != self.excess.shape or self.weights.ndim != 1:
            raise ValueError("weights and poles must be 1-d arrays of equal length")
        if np.any(self.weights <= 0):
            raise ValueError("pole weights must be strictly positive")
        if np.any(self.excess <= 0) or np.any(np.diff(self.excess) <= 0):
            raise ValueError("poles must be strictly increasing and greater than 1")

    @classmethod
    def from_poles(cls, weights, poles, constant: float = 0.0) -> "PoleSum":
        """Build from pole locations zeta_i (> 1) instead of their excess over 1."""
        poles = np.asarray(poles, dtype=np.float64)
        order = np.argsort(poles)
        return cls(
            constant=float(constant),
            weights=np.asarray(weights, dtype=np.float64)[order],
            excess=poles[order] - 1.0,
        )

    @property
    def k(self) -> int:
        return int(self.weights.size)

    @property
    def poles(self) -> np.ndarray:
        return 1.0 + self.excess

    def at_shift(self, w: float | np.ndarray) -> float | np.ndarray:
        """f(1 + w); vectorised over ``w``."""
        w = np.asarray(w, dtype=np.float64)
        value = self.constant + np.sum(self.weights / (self.excess - w[..., None]), axis=-1)
        return float(value) if value.ndim == 0 else value

    def derivative_at_shift(self, w: float | np.ndarray) -> float | np.ndarray:
        """f'(1 + w) = sum_i weights_i / (zeta_i - z)^2."""
        w = np.asarray(w, dtype=np.float64)
        value = np.sum(self.weights / (self.excess - w[..., None]) ** 2, axis=-1)
        return float(value) if value.ndim == 0 else value

    def __call__(self, z: float | np.ndarray) -> float | np.ndarray:
        return self.at_shift(np.asarray(z, dtype=np.float64) - 1.0)


def _group_by_eigenvalue(
    lam: np.ndarray, weight: np.ndarray, tolerance: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(class eigenvalue, summed weight, class size) with classes split at gaps > tolerance."""
    order = np.argsort(lam, kind="stable")
    lam_sorted = lam[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(lam_sorted) > tolerance) + 1))
    return lam_sorted[starts], np.add.reduceat(weight[order], starts), np.diff(np.append(starts, lam.size))


def pole_sum_of_f(
    xi: TorusPoint,
    geom: TorusGeometry,
    eig: Optional[EigenTable] = None,
    config: Optional[Configuration] = None,
) -> PoleSum:
    """Pole-sum form of f_n(xi; z) = (g_n(0; z) + g_n(xi; z)) / 2.

    Every v != 0 contributes n^{-d} (1 + cos(2 pi <xi, v>/n)) / 2 * zeta_v / (zeta_v - z)
    with zeta_v = 1 / (1 - lambda_v). Eigenvalues within ``grouping_tolerance`` share a
    pole; classes with lambda_v = 1 (even n) form the constant term.
    """
    config = config or get_configuration()
    geom.validate(xi)
    eig = eig or cached_eigen_table(geom)
    mask = eig.nonzero_mask()
    lam = np.asarray(eig.lam)[mask]
    weight = 0.5 * (1.0 + phase_cosines(xi, geom)[mask])

    lam_g, weight_g, sizes = _group_by_eigenvalue(lam, weight, config.grouping_tolerance)
    scale = 1.0 / geom.volume
    top = 1.0 - lam_g <= config.grouping_tolerance
    live = weight_g > ZERO_WEIGHT * sizes
    constant = scale * math.fsum(weight_g[top & live])

    lam_g, weight_g, keep = lam_g[~top], weight_g[~top], live[~top]
    if lam_g.size and not keep[0]:
        logger.debug(f"xi={xi.coords}: the slowest eigenvalue class carries no weight")
    lam_g, weight_g = lam_g[keep], weight_g[keep]
    if lam_g.size == 0 and constant == 0.0:
        raise DegenerateSpectrum(f"every pole weight of f_n({xi.coords}; z) vanishes")

    lam_hat = 1.0 - lam_g
    return PoleSum(constant=constant, weights=scale * weight_g / lam_hat, excess=lam_g / lam_hat)
