"""Validated inputs of the asymptotic formulas and of covariance queries."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator


class AsymptoticParams(BaseModel):
    """Dimension, walk count and time density u = lim (t + 1) / n^d."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=3, description="Torus dimension")
    ell: int = Field(..., ge=1, description="Number of independent walks")
    u: float = Field(..., gt=0, description="Time density (t + 1) / n^d in the limit")

    def density_argument(self, g0: float, walks: int | None = None) -> float:
        """2 * walks * u / G(0), the argument of nu_d; ``walks`` defaults to ell."""
        walks = self.ell if walks is None else walks
        return 2.0 * walks * self.u / g0


class CovarianceQuery(BaseModel):
    """Subsets I, J of the walks, stored as bitmasks over ell walks."""

    model_config = ConfigDict(frozen=True)

    ell: int = Field(..., ge=1, le=16)
    first: int = Field(..., ge=0, description="Bitmask of I")
    second: int = Field(..., ge=0, description="Bitmask of J")

    @model_validator(mode="after")
    def _masks_fit(self) -> "CovarianceQuery":
        limit = 1 << self.ell
        if self.first >= limit or self.second >= limit:
            raise ValueError(f"subset masks must lie below 2^{self.ell}, got {self.first}, {self.second}")
        return self

    @classmethod
    def from_sets(cls, ell: int, first: set[int] | list[int], second: set[int] | list[int]) -> "CovarianceQuery":
        """Build from 1-based walk labels, e.g. I = {1}, J = {2}."""
        return cls(ell=ell, first=_mask(first, ell), second=_mask(second, ell))

    @property
    def k(self) -> int:
        """|I & J|"""
        return (self.first & self.second).bit_count()

    @property
    def r(self) -> int:
        """|I ^ J|"""
        return (self.first ^ self.second).bit_count()

    def swapped(self) -> "CovarianceQuery":
        return CovarianceQuery(ell=self.ell, first=self.second, second=self.first)


def _mask(labels, ell: int) -> int:
    mask = 0
    for label in labels:
        if not 1 <= int(label) <= ell:
            raise ValueError(f"walk label {label} outside 1..{ell}")
        mask |= 1 << (int(label) - 1)
    return mask


def subset_label(mask: int) -> str:
    """'{1,3}' style label of a subset bitmask; '{}' for the empty set."""
    members = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "{" + ",".join(members) + "}"
