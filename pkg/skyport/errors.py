# File: skyport/errors.py


class SkyportError(Exception):
    """Base class for every error raised by the suite."""


class InvalidInstanceError(SkyportError, ValueError):
    """A ProblemInstance (or one of its zones) breaks a structural invariant."""


class ScenarioError(SkyportError, ValueError):
    """Scenario or solver options out of range for the instance."""


class TripFormatError(SkyportError, ValueError):
    """Trip or zone file is missing a required column."""

    def __init__(self, column: str, message: str | None = None):
        self.column = column
        super().__init__(message or f"missing required column '{column}'")


class DataError(SkyportError, ValueError):
    """Input data cannot support the requested computation (e.g. no coordinates)."""


class UnroutablePairError(SkyportError):
    """A positive-demand pair has neither a direct cost nor a reachable hub."""

    def __init__(self, origin: int, airport: int):
        self.origin = origin
        self.airport = airport
        super().__init__(f"unroutable demand pair ({origin} → {airport})")


class EnumerationCapError(SkyportError):
    """Brute force refused: too many subsets to enumerate."""


class QueueUnstableError(SkyportError, ValueError):
    """Arrival rate at or above the total service capacity c·μ."""


class UndefinedInputError(SkyportError, ValueError):
    """An aggregate was requested over an empty input."""


class ExportError(SkyportError):
    """The ILP or GeoJSON export cannot be produced from the inputs."""
