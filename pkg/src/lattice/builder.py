from typing import Optional

from src.config.configuration import Configuration
from src.config.methods import DEFAULT_LATTICE_GREEN_METHOD, LatticeGreenMethod
from src.lattice.bessel import BesselSolver
from src.lattice.extrapolation import ExtrapolationSolver
from src.lattice.quadrature import QuadratureSolver
from src.lattice.solver import LatticeGreenSolver


def build_solver(
    method: LatticeGreenMethod | str = DEFAULT_LATTICE_GREEN_METHOD,
    config: Optional[Configuration] = None,
) -> LatticeGreenSolver:
    method = LatticeGreenMethod(method)
    if method == LatticeGreenMethod.EXTRAPOLATION:
        return ExtrapolationSolver(config)
    elif method == LatticeGreenMethod.QUADRATURE:
        return QuadratureSolver(config)
    elif method == LatticeGreenMethod.BESSEL:
        return BesselSolver()
    raise ValueError(f"Unsupported lattice Green method: {method}")
