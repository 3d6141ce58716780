"""Midpoint-rule cross-check of the Fourier integrals for G and G'.

The grid has M = 3^k cells per axis on (-1/2, 1/2]^d so that one cell is centred on
the singularity at the origin. That cell is left out of the sum and replaced by an
estimate between an inscribed-ball lower bound and a circumscribed-ball upper bound.
"""

import math
from typing import Optional

import numpy as np
from scipy.special import gamma

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger
from src.config.methods import LatticeGreenMethod
from src.lattice.solver import LatticeEstimate, LatticeGreenSolver

logger = get_logger(__name__)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2.0 * math.pi ** (d / 2) / float(gamma(d / 2))


def _ball_integral(d: int, s: int, r: float) -> float:
    """Integral of |x|^{-s} over the ball of radius r in R^d (d > s)."""
    return sphere_area(d) * r ** (d - s) / (d - s)


class QuadratureSolver(LatticeGreenSolver):
    method = LatticeGreenMethod.QUADRATURE

    def __init__(self, config: Optional[Configuration] = None, cells: Optional[int] = None):
        self.config = config or get_configuration()
        self.cells = cells

    def grid_size(self, d: int) -> int:
        if self.cells is not None:
            return self.cells
        m = 3
        while (3 * m) ** d <= self.config.max_vertices:
            m *= 3
        return m

    def _midpoint_sum(self, xi: tuple[int, ...], d: int, m: int, s: int) -> float:
        """Midpoint sum of cos(2 pi xi.x) lambda(x)^{-s/2} (times 1 - lambda for s = 4),
        central cell excluded."""
        k = np.arange(m) - (m - 1) // 2
        x = k / m
        sin2 = np.sin(np.pi * x) ** 2

        rest_sum = np.zeros((m,) * (d - 1))
        rest_phase = np.zeros((m,) * (d - 1))
        for j, c in enumerate(xi[1:]):
            shape = [1] * (d - 1)
            shape[j] = m
            rest_sum = rest_sum + sin2.reshape(shape)
            rest_phase = rest_phase + (c * x).reshape(shape)

        parts = []
        for i in range(m):
            lam = (sin2[i] + rest_sum) / d
            positive = lam > 0
            inv = np.where(positive, 1.0 / np.where(positive, lam, 1.0), 0.0)
            weight = inv if s == 2 else (1.0 - lam) * inv * inv
            parts.append(float(np.sum(np.cos(2.0 * np.pi * (xi[0] * x[i] + rest_phase)) * weight)))
        return math.fsum(parts) / m**d

    def _central_cell(self, xi: tuple[int, ...], d: int, m: int, s: int) -> tuple[float, float]:
        """(estimate, half-width) for the excluded cell of side h = 1/m."""
        h = 1.0 / m
        r_in, r_out = h / 2, h * math.sqrt(d) / 2
        norm_xi = math.sqrt(sum(c * c for c in xi))
        cos_min = math.cos(min(math.pi, 2.0 * math.pi * norm_xi * r_out))
        upper = (d / 4.0) ** (s / 2) * _ball_integral(d, s, r_out)
        lower_factor = (d / math.pi**2) ** (s / 2)
        if s == 4:
            lower_factor *= 1.0 - math.pi**2 * r_out**2 / d
        lower = cos_min * lower_factor * _ball_integral(d, s, r_in) if cos_min >= 0 else -upper
        return 0.5 * (upper + lower), 0.5 * (upper - lower)

    def _integrate(self, xi: tuple[int, ...], d: int, s: int) -> LatticeEstimate:
        m = self.grid_size(d)
        coarse = max(3, m // 3)
        fine_cell, fine_err = self._central_cell(xi, d, m, s)
        coarse_cell, _ = self._central_cell(xi, d, coarse, s)
        fine = self._midpoint_sum(xi, d, m, s) + fine_cell
        rough = self._midpoint_sum(xi, d, coarse, s) + coarse_cell
        bound = abs(fine - rough) + fine_err
        logger.debug(f"quadrature xi={xi} d={d} M={m}: {fine!r} +/- {bound:.3e}")
        return LatticeEstimate(value=fine, bound=bound, method=self.method.value, radius=m)

    def _green(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        return self._integrate(xi, d, s=2)

    def _green_deriv(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        return self._integrate(xi, d, s=4)
