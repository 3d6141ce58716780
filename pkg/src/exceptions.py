"""Error hierarchy shared by all sub-packages."""


class TorusVacantError(Exception):
    """Base class for domain errors raised by this package."""


class ConfigError(TorusVacantError):
    """A configuration file, mapping or flag could not be parsed or validated."""


class InvalidPoint(TorusVacantError, ValueError):
    """Coordinates do not describe a vertex of the torus."""


class BudgetExceeded(TorusVacantError):
    """The requested table or simulation exceeds the configured vertex budget."""


class PoleProximity(TorusVacantError):
    """A generating function was evaluated too close to one of its poles."""


class FloorViolation(TorusVacantError):
    """A two-point function fell below the calibrated floor; indicates a table bug."""


class NonConvergence(TorusVacantError):
    """An extrapolation or truncated lattice sum failed its stopping rule."""


class DimensionUnsupported(TorusVacantError):
    """The quantity is not finite (or not defined) in the requested dimension."""


class DegenerateSpectrum(TorusVacantError):
    """All pole weights vanished while building a pole sum."""


class BracketFailure(TorusVacantError):
    """No sign change of the root function inside an inter-pole interval."""
