"""Exception hierarchy and command-line exit codes."""


class OccupancyError(Exception):
    """Base class for every error raised by this package."""

    exit_code: int = 1


class DimensionError(OccupancyError, ValueError):
    """Operands have incompatible shapes."""


class InvalidSetError(OccupancyError, ValueError):
    """A set or interval violates its construction invariants."""


class GeometryError(OccupancyError, ValueError):
    """Scenario geometry cannot be built (e.g. corner radius too large)."""

    exit_code = 2


class ConfigError(OccupancyError, ValueError):
    """Configuration file or flag value is invalid."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OutputError(OccupancyError, OSError):
    """Output directory or file cannot be written."""

    exit_code = 3


class RecordError(OccupancyError, FileNotFoundError):
    """A run record is missing or incomplete."""

    exit_code = 4


class InfeasibleProgramError(OccupancyError, RuntimeError):
    """A linear program that must be solvable reported otherwise."""


class DegenerateInnovationError(OccupancyError, RuntimeError):
    """The EKF innovation covariance cannot be inverted."""
