"""Laplace-transform representation of the lattice Green function.

For the simple walk, G_*(xi) = d * int_0^inf prod_j e^{-a} I_{xi_j}(a) da. The lazy
walk has G = 2 G_* and G' = (2d)^2 int_0^inf a prod_j e^{-a} I_{xi_j}(a) da - G.
Past a = A the substitution a = y^{-2} turns the algebraic tail into a smooth
integrand on (0, A^{-1/2}].
"""

import math
from typing import Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import ive

from src.config.logger import get_logger
from src.config.methods import LatticeGreenMethod
from src.lattice.solver import LatticeEstimate, LatticeGreenSolver, require_green_dimension

logger = get_logger(__name__)

EPSABS = 1e-14
EPSREL = 1e-13
QUAD_LIMIT = 400
BOUND_FLOOR = 1e-12


def bessel_moment(xi: Sequence[int], d: int, power: int) -> tuple[float, float]:
    """(value, abserr) of int_0^inf a^power prod_j ive(|xi_j|, a) da."""
    orders = np.abs(np.asarray(xi, dtype=np.float64))
    if orders.size != d:
        raise ValueError(f"expected {d} coordinates, got {orders.size}")

    def integrand(a: float) -> float:
        return a**power * float(np.prod(ive(orders, a)))

    def tail(y: float) -> float:
        return 2.0 * integrand(1.0 / (y * y)) / y**3

    split = max(16.0, float(np.max(orders)) ** 2)
    head, head_err = quad(integrand, 0.0, split, epsabs=EPSABS, epsrel=EPSREL, limit=QUAD_LIMIT)
    rest, rest_err = quad(tail, 0.0, 1.0 / math.sqrt(split), epsabs=EPSABS, epsrel=EPSREL, limit=QUAD_LIMIT)
    return head + rest, head_err + rest_err


class BesselSolver(LatticeGreenSolver):
    method = LatticeGreenMethod.BESSEL

    def _green(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        value, err = bessel_moment(xi, d, 0)
        return LatticeEstimate(
            value=2.0 * d * value, bound=max(BOUND_FLOOR, 10.0 * 2.0 * d * err), method=self.method.value
        )

    def _green_deriv(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        green = self._green(xi, d)
        value, err = bessel_moment(xi, d, 1)
        scale = (2.0 * d) ** 2
        return LatticeEstimate(
            value=scale * value - green.value,
            bound=max(BOUND_FLOOR, 10.0 * scale * err) + green.bound,
            method=self.method.value,
        )


def simple_walk_green(xi: Sequence[int], d: int) -> float:
    """G_*(xi) of the non-lazy simple random walk on Z^d (d >= 3)."""
    require_green_dimension(d)
    value, _ = bessel_moment(xi, d, 0)
    return d * value
