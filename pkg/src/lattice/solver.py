import abc
from dataclasses import dataclass
from typing import Sequence

from src.config.methods import LatticeGreenMethod
from src.exceptions import DimensionUnsupported


@dataclass(frozen=True)
class LatticeEstimate:
    """A lattice Green value together with an explicit error bound."""

    value: float
    bound: float
    method: str
    radius: int = 0  # largest side length, grid size or cutoff used

    def __float__(self) -> float:
        return self.value


def canonical_xi(xi: Sequence[int], d: int) -> tuple[int, ...]:
    """Sorted absolute coordinates; the lattice Green function is invariant under
    the hyperoctahedral group, so this is the cache key."""
    coords = tuple(abs(int(c)) for c in xi)
    if len(coords) != d:
        raise ValueError(f"expected {d} coordinates, got {len(coords)}")
    return tuple(sorted(coords))


def require_green_dimension(d: int) -> None:
    if d < 3:
        raise DimensionUnsupported(f"G(xi) is infinite for the recurrent walk in d={d}")


def require_deriv_dimension(d: int) -> None:
    if d < 5:
        raise DimensionUnsupported(f"G'(xi) diverges in d={d}; it is finite only for d >= 5")


class LatticeGreenSolver(abc.ABC):
    """
    Computes G(xi) and G'(xi) of the 1/2-lazy walk on Z^d.
    """

    method: LatticeGreenMethod

    def green(self, xi: Sequence[int], d: int) -> LatticeEstimate:
        require_green_dimension(d)
        return self._green(canonical_xi(xi, d), d)

    def green_deriv(self, xi: Sequence[int], d: int) -> LatticeEstimate:
        require_deriv_dimension(d)
        return self._green_deriv(canonical_xi(xi, d), d)

    @abc.abstractmethod
    def _green(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        """
        G(xi) for a canonical xi.
        """
        pass

    @abc.abstractmethod
    def _green_deriv(self, xi: tuple[int, ...], d: int) -> LatticeEstimate:
        """
        G'(xi) for a canonical xi, d >= 5.
        """
        pass
