"""Roots of alpha_0 + (1 - z) f(z) and the partial-fraction weights of f_hat / (alpha_0 + (1 - z) f).

Work happens in w = z - 1. On each interval between consecutive poles the function
phi(w) = -alpha_0 / w + f(1 + w) is strictly increasing from -inf to +inf, so one root
sits in each interval and plain bisection finds it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from src.config.configuration import get_configuration
from src.config.logger import get_logger
from src.exceptions import BracketFailure
from src.series.pole_sum import PoleSum

logger = get_logger(__name__)

MAX_BISECTIONS = 400
MAX_DOUBLINGS = 200
BLOCK_ELEMENTS = 1 << 22
COMPANION_MAX_K = 8


@dataclass(frozen=True)
class TailCoefficient:
    """Coefficient of z^t with its one-term approximation and the bound on their gap."""

    value: float
    one_term: float
    bound: float


@dataclass(frozen=True)
class RootSet:
    shifts: np.ndarray
    weights: np.ndarray
    error_coefficient: float
    first_pole_excess: float
    alpha0: float
    interlaced: int  # leading roots that sit strictly between consecutive poles
    first_bracket: Optional[tuple[float, float]] = None

    @property
    def roots(self) -> np.ndarray:
        return 1.0 + self.shifts

    @property
    def k(self) -> int:
        return int(self.shifts.size)

    def generating(self, z: float | np.ndarray) -> float | np.ndarray:
        """sum_i a_i / (gamma_i - z), the reconstructed generating function."""
        w = np.asarray(z, dtype=np.float64) - 1.0
        value = np.sum(self.weights / (self.shifts - w[..., None]), axis=-1)
        return float(value) if value.ndim == 0 else value

    def powers(self, t: int) -> np.ndarray:
        """gamma_i^{-t-1} as exp(-(t+1) log1p(w_i))."""
        return np.exp(-(t + 1) * np.log1p(self.shifts))


def _evaluate(ps: PoleSum, w: np.ndarray) -> np.ndarray:
    """f(1 + w) over a long vector of w, in row blocks bounded by BLOCK_ELEMENTS."""
    step = max(1, BLOCK_ELEMENTS // max(1, ps.k))
    out = np.empty_like(w)
    for start in range(0, w.size, step):
        out[start : start + step] = ps.at_shift(w[start : start + step])
    return out


def _bisect(ps: PoleSum, alpha0: float, lo: np.ndarray, hi: np.ndarray, rtol: float) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = lo.copy(), hi.copy()
    for _ in range(MAX_BISECTIONS):
        mid = lo + 0.5 * (hi - lo)
        active = (hi - lo > rtol * np.abs(mid)) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        w = mid[idx]
        below = _evaluate(ps, w) - alpha0 / w < 0
        lo[idx[below]] = w[below]
        hi[idx[~below]] = w[~below]
    return lo, hi


def _outer_bound(ps: PoleSum, alpha0: float) -> float:
    """A point beyond the last pole where phi > 0; exists only when c > 0."""
    top = float(ps.excess[-1]) if ps.k else 0.0
    bound = max(2.0 * top, alpha0 / ps.constant, 1.0)
    for _ in range(MAX_DOUBLINGS):
        if ps.at_shift(bound) - alpha0 / bound > 0:
            return bound
        bound *= 2.0
    raise BracketFailure(f"no sign change beyond the last pole up to w={bound!r}")


def find_roots(
    ps: PoleSum,
    alpha0: float,
    fhat: Optional[PoleSum] = None,
    tolerance: Optional[float] = None,
) -> RootSet:
    """Roots gamma_i of alpha_0 + (1 - z) f(z) and the weights of the partial fractions.

    Args:
        ps: The pole sum f.
        alpha0: Boundary weight at z = 1, strictly positive.
        fhat: Numerator of the generating function; ``ps`` itself when omitted.
        tolerance: Relative bisection tolerance; ``root_tolerance`` from configuration by default.

    Returns:
        RootSet with a_i = f_hat(gamma_i) / (f(gamma_i) + (gamma_i - 1) f'(gamma_i)).
    """
    if not alpha0 > 0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    rtol = tolerance if tolerance is not None else get_configuration().root_tolerance
    fhat = fhat or ps

    lower = np.concatenate(([0.0], ps.excess[:-1])) if ps.k else np.empty(0)
    upper = ps.excess.copy()
    if ps.constant > 0:
        lower = np.append(lower, float(ps.excess[-1]) if ps.k else 0.0)
        upper = np.append(upper, _outer_bound(ps, alpha0))
    if lower.size == 0:
        raise BracketFailure("the pole sum has neither poles nor a constant term")

    lo, hi = lower.copy(), upper.copy()
    first_bracket = None
    w_bar = alpha0 / ps.at_shift(0.0)
    if ps.k and w_bar < ps.excess[0]:
        first_bracket = (alpha0 / ps.at_shift(w_bar), w_bar)
        lo[0], hi[0] = first_bracket

    lo, hi = _bisect(ps, alpha0, lo, hi, rtol)
    shifts = lo + 0.5 * (hi - lo)

    # An endpoint that never moved off a pole means phi kept one sign on the interval.
    stuck = (lo == lower) & (np.arange(lo.size) > 0) | (hi == upper) & (np.arange(hi.size) < ps.k)
    if np.any(stuck) or np.any(shifts <= lower) or np.any(shifts >= upper):
        bad = np.flatnonzero(stuck | (shifts <= lower) | (shifts >= upper))
        raise BracketFailure(f"no sign change of phi on interval(s) {bad.tolist()}")

    f_val = ps.at_shift(shifts)
    f_der = ps.derivative_at_shift(shifts)
    f_hat = fhat.at_shift(shifts)
    weights = f_hat / (f_val + shifts * f_der)
    roots = RootSet(
        shifts=shifts,
        weights=weights,
        error_coefficient=float(np.max(np.abs(f_hat / f_val))),
        first_pole_excess=float(ps.excess[0]) if ps.k else math.inf,
        alpha0=alpha0,
        interlaced=ps.k,
        first_bracket=first_bracket,
    )
    logger.debug(f"found {roots.k} roots; gamma_1 - 1 = {shifts[0]!r}")
    return roots


def coefficient_at(rs: RootSet, t: int) -> TailCoefficient:
    """Coefficient of z^t in sum_i a_i / (gamma_i - z), i.e. sum_i a_i gamma_i^{-t-1}."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    terms = rs.weights * rs.powers(t)
    bound = rs.error_coefficient * math.exp(-t * math.log1p(rs.first_pole_excess))
    return TailCoefficient(value=math.fsum(terms.tolist()), one_term=float(terms[0]), bound=bound)


def companion_roots(ps: PoleSum, alpha0: float) -> np.ndarray:
    """Roots of P(z) = alpha_0 prod_j (zeta_j - z) + (1 - z) * [c prod_j (zeta_j - z)
    + sum_i alpha_i prod_{j != i} (zeta_j - z)] from its companion matrix.

    Only for small k; used to cross-check the bisection.
    """
    if ps.k > COMPANION_MAX_K:
        raise ValueError(f"companion roots are limited to k <= {COMPANION_MAX_K}, got {ps.k}")
    factors = [Polynomial([zeta, -1.0]) for zeta in ps.poles]
    full = Polynomial([1.0])
    for factor in factors:
        full = full * factor
    numerator = ps.constant * full
    for i, alpha in enumerate(ps.weights):
        rest = Polynomial([1.0])
        for j, factor in enumerate(factors):
            if j != i:
                rest = rest * factor
        numerator = numerator + alpha * rest
    poly = alpha0 * full + Polynomial([1.0, -1.0]) * numerator
    roots = poly.roots()
    return np.sort(roots.real)
