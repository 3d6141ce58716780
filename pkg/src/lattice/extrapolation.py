"""G and G' as limits of the torus values g_n, g_n' along an increasing n-sequence.

The punctured Riemann sums behind g_n(xi) have an error expansion in the powers
n^{-(d-s)}, n^{-(d-s+2)}, ... where s = 2 for g and s = 4 for g'. The Richardson
table eliminates these powers one at a time.
"""

from typing import Optional, Sequence

import numpy as np

from src.config.configuration import Configuration, get_configuration
from src.config.logger import get_logger
from src.config.methods import LatticeGreenMethod
from src.exceptions import NonConvergence
from src.lattice.solver import LatticeEstimate, LatticeGreenSolver
from src.spectral.green import green_at
from src.torus.geometry import TorusGeometry

logger = get_logger(__name__)

BOUND_FACTOR = 10.0
MAX_LEVELS = 8


def richardson_diagonal(ns: Sequence[int], values: Sequence[float], exponents: Sequence[float]) -> list[float]:
    """Diagonal T_0, T_1, ... of the generalized Richardson table.

    T_k solves y_i = T + sum_{j<k} c_j n_i^{-p_j} on the first k + 1 points.
    """
    h = np.asarray(ns, dtype=np.float64)
    h = h[0] / h
    diagonal = []
    for k in range(len(values)):
        system = np.ones((k + 1, k + 1))
        for j in range(k):
            system[:, j + 1] = h[: k + 1] ** exponents[j]
        solution = np.linalg.solve(system, np.asarray(values[: k + 1], dtype=np.float64))
        diagonal.append(float(solution[0]))
    return diagonal


class ExtrapolationSolver(LatticeGreenSolver):
    method = LatticeGreenMethod.EXTRAPOLATION

    def __init__(self, config: Optional[Configuration] = None, n_values: Optional[Sequence[int]] = None):
        self.config = config or get_configuration()
        self.n_values = list(n_values) if n_values is not None else None

    def n_sequence(self, d: int) -> list[int]:
        """Doubling from ``lattice_n_start``; an arithmetic sequence when the vertex
        budget leaves fewer than four doublings."""
        if self.n_values is not None:
            return self.n_values
        cfg = self.config
        n_cap = min(cfg.lattice_n_max, int(round(cfg.max_vertices ** (1.0 / d))))
        while n_cap**d > cfg.max_vertices:
            n_cap -= 1

        doubling = []
        n = cfg.lattice_n_start
        while n <= n_cap:
            doubling.append(n)
            n *= 2
        if len(doubling) >= 4:
            return doubling

        step = max(2, cfg.lattice_n_start // 4)
        arithmetic = list(range(cfg.lattice_n_start, n_cap + 1, step))[:MAX_LEVELS]
        return arithmetic if len(arithmetic) > len(doubling) else doubling

    def _extrapolate(self, xi: tuple[int, ...], d: int, deriv: bool) -> LatticeEstimate:
        ns = self.n_sequence(d)
        singularity = 4 if deriv else 2
        exponents = [d - singularity + 2 * j for j in range(len(ns))]
        values: list[float] = []
        last_gap = float("inf")
        for i, n in enumerate(ns):
            if 2 * max(xi) >= n:
                raise NonConvergence(f"side length {n} is too small for xi={xi}")
            g, gprime = green_at(TorusGeometry(d, n).point(xi), TorusGeometry(d, n))
            values.append(gprime if deriv else g)
            if i == 0:
                continue
            if not deriv and not any(xi) and values[-1] <= values[-2]:
                logger.warning(f"g_n(0) did not increase from n={ns[i - 1]} to n={n} in d={d}")
            diagonal = richardson_diagonal(ns[: i + 1], values, exponents)
            last_gap = abs(diagonal[-1] - diagonal[-2])
            logger.debug(f"xi={xi} d={d} n={n}: extrapolant {diagonal[-1]!r}, gap {last_gap:.3e}")
            if last_gap < self.config.lattice_tolerance:
                return LatticeEstimate(
                    value=diagonal[-1], bound=BOUND_FACTOR * last_gap, method=self.method.value, radius=n
                )
        raise NonConvergence(
            f"extrapolation of {'G prime' if deriv else 'G'}({xi}) in d={d} stopped at n={ns[-1]} "
            f"with gap {last_gap:.3e} > {self.config.lattice_tolerance}; raise max_vertices"
        )

    def _green(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        return self._extrapolate(xi, d, deriv=False)

    def _green_deriv(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        return self._extrapolate(xi, d, deriv=True)
