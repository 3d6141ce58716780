"""Dense-matrix and enumeration oracles, independent of the spectral machinery."""

import itertools

import numpy as np

from src.torus.geometry import TorusGeometry


def transition_matrix(geom: TorusGeometry) -> np.ndarray:
    """P = I/2 + (1/(4d)) sum over the 2d unit moves, indexed by row-major vertex index."""
    size = geom.volume
    matrix = np.eye(size) * 0.5
    for index in range(size):
        coords = np.array(geom.point_of(index).coords)
        for axis in range(geom.d):
            for sign in (1, -1):
                step = coords.copy()
                step[axis] += sign
                matrix[index, geom.index_of(step)] += 1.0 / (4 * geom.d)
    return matrix


def absorbing_tails(geom: TorusGeometry, targets, t_max: int) -> np.ndarray:
    """Pr(tau(A) > t) for t = 0..t_max, uniform start, by iterating the killed kernel."""
    matrix = transition_matrix(geom)
    blocked = {geom.index_of(p) for p in targets}
    keep = np.array([i not in blocked for i in range(geom.volume)])
    killed = matrix[np.ix_(keep, keep)]
    mass = np.full(int(keep.sum()), 1.0 / geom.volume)
    tails = np.empty(t_max + 1)
    for t in range(t_max + 1):
        tails[t] = mass.sum()
        mass = mass @ killed
    return tails


def green_by_fundamental_matrix(geom: TorusGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Row 0 of sum_t (P^t - Pi) and of sum_t t (P^t - Pi), both from M = P - Pi."""
    matrix = transition_matrix(geom)
    size = geom.volume
    deviation = matrix - np.full((size, size), 1.0 / size)
    resolvent = np.linalg.inv(np.eye(size) - deviation)
    g = resolvent - np.full((size, size), 1.0 / size)
    gprime = deviation @ resolvent @ resolvent
    return g[0].reshape(geom.shape), gprime[0].reshape(geom.shape)


def pair_tails(geom: TorusGeometry, t: int) -> np.ndarray:
    """b(xi) = Pr(tau({0, xi}) > t) for every xi, from the absorbing chain."""
    out = np.empty(geom.volume)
    for index in range(geom.volume):
        xi = geom.point_of(index)
        out[index] = absorbing_tails(geom, [geom.origin, xi], t)[t]
    return out


def covariance_by_pairs(geom: TorusGeometry, ell: int, t: int, first: int, second: int) -> float:
    """cov(R^I, R^J) = N sum_xi (1-2a+b)^k b^{k'} (a-b)^r - N^2 (1-a)^{|I|+|J|} a^{2 ell - |I| - |J|}."""
    b = pair_tails(geom, t)
    a = b[0]
    k = (first & second).bit_count()
    r = (first ^ second).bit_count()
    rest = ell - k - r
    size = geom.volume
    joint = size * np.sum((1 - 2 * a + b) ** k * b**rest * (a - b) ** r)
    marginal = size * size * (1 - a) ** (first.bit_count() + second.bit_count())
    marginal *= a ** (2 * ell - first.bit_count() - second.bit_count())
    return float(joint - marginal)


def start_collision_variance(geom: TorusGeometry) -> float:
    """var V at t = 0 with two walks, by enumerating both starting vertices."""
    size = geom.volume
    values = [size - len({x, y}) for x, y in itertools.product(range(size), repeat=2)]
    return float(np.var(values))
