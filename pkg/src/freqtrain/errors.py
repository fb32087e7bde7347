"""Exception hierarchy shared across the toolkit."""


class FreqTrainError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(FreqTrainError):
    """Shape or size precondition violated (odd sizes, non-divisible ratios, ...)."""


class DataError(FreqTrainError):
    """Input payload is malformed (non-finite values, bad file contents, ...)."""


class SymmetryError(FreqTrainError):
    """A spectrum expected to invert to a real image carries too much imaginary residue."""


class ConfigError(FreqTrainError):
    """Invalid policy, kernel, schedule or search configuration."""


class RangeError(FreqTrainError):
    """Scalar argument outside its documented range (epoch index, frequency bin, ...)."""


class ProtocolError(FreqTrainError):
    """An external oracle process violated the accuracy-query contract."""

    def __init__(self, message: str, captured: str | None = None):
        super().__init__(message)
        self.captured = captured


class ConsistencyError(FreqTrainError):
    """Internal cross-check failed (analytic vs. measured coefficients disagree)."""
