"""Validated description of one Monte Carlo experiment."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config.loader import load_config_file, process_dict
from src.exceptions import ConfigError
from src.theory.limits import time_from_density
from src.torus.geometry import TorusGeometry
from src.torus.walk import MAX_WALKS

FULL_MATRIX_MAX_ELL = 8


class ExperimentConfig(BaseModel):
    """Parameters of a replicate experiment. Exactly one of ``t`` and ``u`` is given."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(..., ge=1, description="Torus dimension")
    n: int = Field(..., ge=2, description="Side length")
    ell: int = Field(1, ge=1, le=MAX_WALKS, description="Number of walks per replicate")
    t: Optional[int] = Field(None, ge=0, description="Walk length in steps")
    u: Optional[float] = Field(None, gt=0, description="Time density; t = round(u n^d) - 1")
    reps: int = Field(2000, ge=2, description="Replicate count m")
    seed: int = Field(0, ge=0, description="Master seed")
    bin_width: Optional[int] = Field(None, ge=1, description="Histogram bin width; Freedman-Diaconis when unset")
    workers: int = Field(1, ge=1, description="Processes sharing the replicates")
    pairs: Optional[list[tuple[int, int]]] = Field(
        None, description="(I, J) bitmask pairs for covariances; all pairs when unset and ell <= 8"
    )

    @field_validator("pairs", mode="before")
    @classmethod
    def _parse_pairs(cls, value: Any) -> Any:
        # "1:2,3:3" in flat key=value files
        if isinstance(value, str):
            pairs = []
            for item in value.split(","):
                if item.strip():
                    first, _, second = item.partition(":")
                    pairs.append((int(first), int(second)))
            return pairs
        return value

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if (self.t is None) == (self.u is None):
            raise ValueError("exactly one of t and u must be given")
        if self.t is None:
            time_from_density(self.u, self.n, self.d)
        limit = 1 << self.ell
        for first, second in self.pairs or []:
            if not (0 <= first < limit and 0 <= second < limit):
                raise ValueError(f"pair ({first}, {second}) is not a pair of subsets of {self.ell} walks")
        return self

    @property
    def geom(self) -> TorusGeometry:
        return TorusGeometry(self.d, self.n)

    @property
    def steps(self) -> int:
        """The walk length, resolved from ``u`` when needed."""
        return self.t if self.t is not None else time_from_density(self.u, self.n, self.d)

    @property
    def density(self) -> float:
        """(t + 1) / n^d for the resolved t."""
        return (self.steps + 1) / self.geom.volume

    def covariance_pairs(self) -> list[tuple[int, int]]:
        if self.pairs is not None:
            return list(self.pairs)
        if self.ell > FULL_MATRIX_MAX_ELL:
            return [(0, 0)]
        size = 1 << self.ell
        return [(i, j) for i in range(size) for j in range(size)]

    def provenance(self) -> dict[str, Any]:
        """Everything needed to rerun the experiment, with the resolved t."""
        record = self.model_dump(exclude_none=True)
        record["t"] = self.steps
        record["u_effective"] = self.density
        return record

    @classmethod
    def from_sources(
        cls,
        file_path: Optional[str | Path] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "ExperimentConfig":
        """Merge a config file with overriding values (flags win) and validate.

        Raises:
            ConfigError: unreadable file or invalid parameters.
        """
        values: dict[str, Any] = dict(load_config_file(file_path)) if file_path else {}
        flags = process_dict({k: v for k, v in (overrides or {}).items() if v is not None})
        # A flag for one of t/u displaces the file's other one; both as flags is an error.
        if "t" in flags and "u" not in flags:
            values.pop("u", None)
        elif "u" in flags and "t" not in flags:
            values.pop("t", None)
        values.update(flags)
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise ConfigError(f"Invalid experiment configuration: {e}") from e
