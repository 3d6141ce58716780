from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional

from src.config.loader import get_str_env, load_yaml_config
from src.config.logger import get_logger
from src.exceptions import ConfigError

logger = get_logger(service="configuration")

OUTPUT_DIR_ENV = "TORUS_VACANT_OUTPUT_DIR"
DEFAULT_CONFIG_FILE = str((Path(__file__).parent.parent.parent / "conf.yaml").resolve())


@dataclass(kw_only=True)
class Configuration:
    """Runtime knobs shared by the library and the CLI."""

    max_vertices: int = 2**26  # Largest n^d any table or simulation may allocate
    workers: int = 1  # Process count for replicate sharding
    fft_workers: int = 1  # Threads handed to scipy.fft (output is deterministic)
    grouping_tolerance: float = 1e-12  # Eigenvalues closer than this share a pole
    root_tolerance: float = 1e-14  # Relative bisection tolerance for denominator roots
    floor_constant: float = 0.5  # C_floor for f_n(xi) >= C_floor
    floor_min_n: int = 4  # N_0: the floor is only asserted from this side length on
    lattice_tolerance: float = 1e-7  # Stopping rule for successive extrapolants
    lattice_n_start: int = 16  # First side length of the doubling sequence
    lattice_n_max: int = 256  # Last side length tried before NonConvergence
    nu_tolerance: float = 1e-6  # Tail bound accepted by the nu_d lattice sum
    nu_radii: list[int] = field(default_factory=lambda: [6, 9, 12, 16])
    cache_dir: str = ".cache/torus-vacant"  # Lattice Green cache and constant files
    output_dir: str = "results"
    log_level: str = "INFO"
    log_dir: Optional[str] = None

    @classmethod
    def from_mapping(cls, mapping: Optional[Mapping[str, Any]] = None) -> "Configuration":
        """Create a Configuration from a (normalized) mapping, ignoring unknown keys."""
        mapping = dict(mapping or {})
        known = {f.name: f for f in fields(cls) if f.init}
        values: dict[str, Any] = {}
        for key, value in mapping.items():
            if key not in known:
                logger.warning(f"Ignoring unknown configuration key '{key}'")
                continue
            if value is None:
                continue
            values[key] = _coerce(key, value, known[key].default)
        output_override = get_str_env(OUTPUT_DIR_ENV)
        if output_override:
            values["output_dir"] = output_override
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    @classmethod
    def load(cls, file_path: str = DEFAULT_CONFIG_FILE) -> "Configuration":
        """Defaults from ``conf.yaml`` (missing file means built-in defaults)."""
        return cls.from_mapping(load_yaml_config(file_path))


def _coerce(key: str, value: Any, default: Any) -> Any:
    if key == "nu_radii":
        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        try:
            return [int(v) for v in value]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"'{key}' must be a list of integers, got {value!r}") from e
    if isinstance(default, bool):
        return str(value).strip().lower() in {"1", "true", "yes", "y", "on"}
    if isinstance(default, int):
        try:
            return int(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"'{key}' must be an integer, got {value!r}") from e
    if isinstance(default, float):
        try:
            return float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"'{key}' must be a number, got {value!r}") from e
    return None if value is None else str(value)


_default_configuration: Optional[Configuration] = None


def get_configuration() -> Configuration:
    """Process-wide configuration, loaded lazily from ``conf.yaml``."""
    global _default_configuration
    if _default_configuration is None:
        _default_configuration = Configuration.load()
    return _default_configuration


def set_configuration(configuration: Configuration) -> None:
    global _default_configuration
    _default_configuration = configuration
