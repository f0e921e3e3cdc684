"""Exception types shared across the toolkit.

All inherit from ValueError so callers that do not care about the fine
distinction can catch the usual thing.
"""


class RawtexError(ValueError):
    """Base class for toolkit errors."""


class CoordinateError(RawtexError):
    """Pixel coordinates outside the image."""


class StructureError(RawtexError):
    """Array shape or channel layout violates a type invariant."""


class AlignmentError(RawtexError):
    """Size or offset is not aligned to the basic pattern width."""


class SpectralRangeError(RawtexError):
    """Requested wavelength outside the sampled spectral range."""


class StepRangeError(RawtexError):
    """Shift or parameter magnitude outside the supported range."""


class ConfigError(RawtexError):
    """Inconsistent or unsupported configuration."""


class DataError(RawtexError):
    """Dataset-level problem (empty class, mismatched lengths, ...)."""
