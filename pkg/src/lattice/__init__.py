"""Infinite-lattice Green function of the 1/2-lazy walk and related lattice sums."""

from .bessel import BesselSolver, simple_walk_green
from .builder import build_solver
from .cache import CacheEntry, LatticeGreenCache, get_lattice_cache
from .extrapolation import ExtrapolationSolver, richardson_diagonal
from .green import green_square_sum, lattice_green, lattice_green_deriv, lazy_green_relation, phi_d
from .quadrature import QuadratureSolver
from .solver import LatticeEstimate, LatticeGreenSolver, canonical_xi
from .sums import LatticeSum, alpha_d, alpha_provenance, lattice_ball, lattice_sum_inverse_fourth

__all__ = [
    "LatticeEstimate",
    "LatticeGreenSolver",
    "ExtrapolationSolver",
    "QuadratureSolver",
    "BesselSolver",
    "build_solver",
    "canonical_xi",
    "richardson_diagonal",
    "CacheEntry",
    "LatticeGreenCache",
    "get_lattice_cache",
    "lattice_green",
    "lattice_green_deriv",
    "lazy_green_relation",
    "simple_walk_green",
    "phi_d",
    "green_square_sum",
    "LatticeSum",
    "lattice_sum_inverse_fourth",
    "alpha_d",
    "alpha_provenance",
    "lattice_ball",
]
