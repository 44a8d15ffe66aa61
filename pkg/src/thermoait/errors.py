"""Exception hierarchy shared by all thermoait modules."""


class ThermoAITError(Exception):
    """Base class for all library errors."""


class SpecError(ThermoAITError):
    """Invalid ensemble specification parameters."""


class SnapshotError(ThermoAITError):
    """Snapshot file is malformed or violates an invariant on load."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvariantViolation(ThermoAITError):
    """A structural invariant (prefix-freeness, Kraft bound, census) failed."""


class PrecisionError(ThermoAITError):
    """A comparison or bit extraction could not be resolved; raise precision."""


class RangeError(ThermoAITError):
    """A requested target or temperature lies outside the certified range."""


class OracleExhausted(ThermoAITError):
    """An oracle stream ended before the search could resolve."""


class CertificationError(ThermoAITError):
    """A certificate inequality failed on observed data."""
