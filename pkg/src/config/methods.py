import enum


class LatticeGreenMethod(enum.Enum):
    EXTRAPOLATION = "extrapolation"
    QUADRATURE = "quadrature"
    BESSEL = "bessel"


class LatticeSumMethod(enum.Enum):
    THETA = "theta"
    SHELL = "shell"


# Method used by lattice_green / lattice_green_deriv when none is requested
DEFAULT_LATTICE_GREEN_METHOD = LatticeGreenMethod.EXTRAPOLATION
# Method used for the many xi needed by the nu_d lattice sums
BULK_LATTICE_GREEN_METHOD = LatticeGreenMethod.BESSEL
