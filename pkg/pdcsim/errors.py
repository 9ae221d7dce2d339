from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by pdcsim."""


class DomainError(SimulationError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(SimulationError):
    """A request exceeds a configured size guard (Wick factors, Fock dimension)."""


class AccuracyError(SimulationError):
    """A numerical self-test or quadrature failed to reach its tolerance."""


class UndefinedRatioError(SimulationError):
    """A ratio was requested whose denominator vanishes."""


class ConfigError(SimulationError):
    """Invalid run configuration, optionally pinned to a config-file line."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source and line is not None:
            location = f"{source}:{line}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2


def exit_code_for(error: Exception) -> int:
    """CLI exit status for a failed run: 1 for bad input, 2 for numerical failures."""
    if isinstance(error, (ConfigError, ValueError)):
        return EXIT_CONFIG
    return EXIT_FAILURE
