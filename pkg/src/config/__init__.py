from .configuration import Configuration, get_configuration, set_configuration
from .loader import load_config_file, load_yaml_config
from .logger import get_logger, log_structured, setup_logging
from .methods import (
    BULK_LATTICE_GREEN_METHOD,
    DEFAULT_LATTICE_GREEN_METHOD,
    LatticeGreenMethod,
    LatticeSumMethod,
)

__all__ = [
    "Configuration",
    "get_configuration",
    "set_configuration",
    "load_config_file",
    "load_yaml_config",
    "get_logger",
    "log_structured",
    "setup_logging",
    "LatticeGreenMethod",
    "LatticeSumMethod",
    "DEFAULT_LATTICE_GREEN_METHOD",
    "BULK_LATTICE_GREEN_METHOD",
]
