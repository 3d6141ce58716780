"""Coefficients theta_{k,r,m}(a) reducing range-intersection covariances to vacant-set variances."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import TypeVar

Number = TypeVar("Number", float, Fraction)


def theta(k: int, r: int, m: int, a: Number) -> Number:
    """Coefficient of b^{k+r-m} in (1 - 2a + b)^k (a - b)^r.

    sum_{j=(m-k)_+}^{min(r, m)} C(r, j) C(k, m - j) (1 - 2a)^{m-j} a^j (-1)^{r-j}.
    Exact when ``a`` is a Fraction.
    """
    if k < 0 or r < 0:
        raise ValueError(f"k and r must be non-negative, got k={k}, r={r}")
    if not 0 <= m <= k + r:
        return a * 0
    terms = [
        math.comb(r, j) * math.comb(k, m - j) * (1 - 2 * a) ** (m - j) * a**j * (-1) ** (r - j)
        for j in range(max(0, m - k), min(r, m) + 1)
    ]
    if isinstance(a, Fraction):
        return sum(terms, Fraction(0))
    return math.fsum(terms)


def theta_row(k: int, r: int, a: Number) -> list[Number]:
    """[theta_{k,r,m}(a) for m = 0..k+r]."""
    return [theta(k, r, m, a) for m in range(k + r + 1)]
