"""Exception hierarchy for sinkchase."""
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .engine import RunRecord


class SinkChaseError(Exception):
    """Base class for all sinkchase errors."""


class ConfigError(SinkChaseError, ValueError):
    """Invalid settings or command line values."""


class TrackFormatError(SinkChaseError, ValueError):
    """A track file could not be parsed or violates the track invariants."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SummaryError(SinkChaseError, ValueError):
    """Summary statistics requested for an empty record set."""


class SimulationError(SinkChaseError):
    """A simulation run ended without catching the target.

    Attributes:
        record: the partial run record accumulated up to the failure
    """

    def __init__(self, message: str, record: "RunRecord") -> None:
        self.record = record
        super().__init__(message)


class NonTerminationError(SimulationError):
    """The sink did not catch the target within ``max_steps``."""


class TrackExhaustedError(SimulationError):
    """A finite track ended before the sink caught the target."""
