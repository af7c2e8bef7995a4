"""
Exception hierarchy for the smart-lighting simulator.

Every error raised on purpose by the simulator derives from SimulationError,
so the CLI can map it to a single machine-parsable line and an exit code.
"""

from typing import Optional


class SimulationError(Exception):
    """Base class for all simulator errors."""

    kind = "simulation"
    exit_code = 1


class ConfigError(SimulationError):
    """Invalid configuration or violated domain invariant."""

    kind = "config"
    exit_code = 2

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class DomainError(SimulationError, ValueError):
    """Numeric argument outside the domain of an operation."""

    kind = "domain"


class WeatherError(SimulationError):
    """Problem reading or interpreting weather data."""

    kind = "weather"
    exit_code = 2


class EpwFormatError(WeatherError):
    """Malformed EPW header or structure."""

    kind = "epw-format"

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class EpwLengthError(WeatherError):
    """EPW file does not hold exactly one non-leap year of hourly records."""

    kind = "epw-length"

    def __init__(self, count: int, expected: int = 8760):
        self.count = count
        self.expected = expected
        super().__init__(f"expected {expected} data records, found {count}")


class EpwParseError(WeatherError):
    """Non-numeric value in a consumed EPW column."""

    kind = "epw-parse"

    def __init__(self, row: int, column: int, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column}: cannot parse {value!r} as a number")


class CellError(SimulationError):
    """A single (location, scenario) sweep cell failed."""

    kind = "cell"

    def __init__(self, location: str, scenario_id: str, cause: BaseException):
        self.location = location
        self.scenario_id = scenario_id
        self.cause = cause
        if isinstance(cause, SimulationError):
            self.exit_code = cause.exit_code
        super().__init__(f"{location} / {scenario_id}: {cause}")

    def __reduce__(self):
        return type(self), (self.location, self.scenario_id, self.cause)
