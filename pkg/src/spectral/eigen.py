from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.torus.geometry import TorusGeometry, TorusPoint


def axis_sin2(n: int) -> np.ndarray:
    """sin^2(pi v / n) for v in [0, n), folded so that v and n - v give identical floats."""
    v = np.arange(n)
    folded = np.minimum(v, n - v)
    return np.sin(np.pi * folded / n) ** 2


@dataclass(frozen=True)
class EigenTable:
    """lambda_v = (1/d) sum_j sin^2(pi v_j / n) over all v, laid out with shape (n,)*d.

    ``1 - lambda_v`` (written lambda-hat) is the eigenvalue of the lazy kernel.
    """

    geom: TorusGeometry
    lam: np.ndarray

    @property
    def lam_hat(self) -> np.ndarray:
        return 1.0 - self.lam

    def nonzero_mask(self) -> np.ndarray:
        mask = np.ones(self.geom.shape, dtype=bool)
        mask[(0,) * self.geom.d] = False
        return mask


def build_eigen_table(geom: TorusGeometry) -> EigenTable:
    s = axis_sin2(geom.n)
    lam = np.zeros(geom.shape, dtype=np.float64)
    for axis in range(geom.d):
        shape = [1] * geom.d
        shape[axis] = geom.n
        lam = lam + s.reshape(shape)
    lam /= geom.d
    lam.setflags(write=False)
    return EigenTable(geom=geom, lam=lam)


@lru_cache(maxsize=16)
def cached_eigen_table(geom: TorusGeometry) -> EigenTable:
    return build_eigen_table(geom)


def eigenvalue(v: TorusPoint, geom: TorusGeometry) -> float:
    """(1/d) sum_j sin^2(pi v_j / n), in [0, 1]."""
    geom.validate(v)
    s = axis_sin2(geom.n)
    return math.fsum(float(s[c]) for c in v.coords) / geom.d


def moment_sum(k: int, geom: TorusGeometry, eig: EigenTable | None = None) -> float:
    """n^{-d} sum_{v != 0} lambda_v^{-k}."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    eig = eig or build_eigen_table(geom)
    lam = eig.lam[eig.nonzero_mask()]
    # Slices along the first axis keep each partial sum pairwise; fsum joins them.
    slices = np.array_split(lam, geom.n)
    return math.fsum(float(np.sum(chunk ** (-k))) for chunk in slices) / geom.volume
