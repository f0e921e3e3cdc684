"""Raw spectral constancy: per-band max-of-median white balance.

The illumination seen by band b is estimated as the maximum, over pixels, of
the 5x5 median-filtered unshuffled channel b; dividing each channel by its
estimate makes the result invariant to any positive per-band rescaling of
the input.  The estimate is computed on the m x m unshuffled channels, never
on the mosaic itself, so spatially adjacent same-band samples feed the
median.

Border policy (declared, the choice is not forced by the formula): replicate
padding; when a channel is smaller than the window, the window clips to the
image and an even-count median takes the lower of the two middle values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import median_filter

from .errors import StructureError
from .msfa import PlaneCube, RawImage, pixel_shuffle, pixel_unshuffle

__all__ = [
    "IlluminationEstimate",
    "median_filter_5x5",
    "estimate_illumination",
    "white_balance",
    "white_balance_cube",
]

ESTIMATE_FLOOR = 1e-8
_WINDOW = 5


@dataclass(frozen=True, eq=False)
class IlluminationEstimate:
    """Per-band illumination scale (the white-balance denominator)."""

    per_band: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.per_band, dtype=np.float64)
        if v.ndim != 1:
            raise StructureError(f"estimate must be a vector, got shape {v.shape}")
        if np.any(v <= 0):
            raise StructureError("estimate entries must be positive")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "per_band", v)


def _clipped_median(channel: np.ndarray) -> np.ndarray:
    """Median over windows clipped to the image; even counts take the lower middle."""
    h, w = channel.shape
    r = _WINDOW // 2
    out = np.empty_like(channel)
    for y in range(h):
        for x in range(w):
            win = channel[max(0, y - r) : y + r + 1, max(0, x - r) : x + r + 1]
            flat = np.sort(win, axis=None)
            out[y, x] = flat[(flat.size - 1) // 2]
    return out


def median_filter_5x5(channel: np.ndarray) -> np.ndarray:
    """5x5 median of one channel with the module's border policy."""
    channel = np.asarray(channel, dtype=np.float64)
    if min(channel.shape) < _WINDOW:
        return _clipped_median(channel)
    return median_filter(channel, size=_WINDOW, mode="nearest")


def estimate_illumination(cube: PlaneCube) -> IlluminationEstimate:
    """Max over pixels of each median-filtered channel, floored at 1e-8."""
    per_band = np.array(
        [max(median_filter_5x5(c).max(), ESTIMATE_FLOOR) for c in cube.channels]
    )
    return IlluminationEstimate(per_band)


def white_balance_cube(cube: PlaneCube) -> tuple[PlaneCube, IlluminationEstimate]:
    est = estimate_illumination(cube)
    balanced = cube.channels / est.per_band[:, None, None]
    return PlaneCube(cube.pattern, balanced), est


def white_balance(img: RawImage) -> RawImage:
    """White-balance a raw mosaic: unshuffle, divide per band, shuffle back."""
    balanced, _ = white_balance_cube(pixel_unshuffle(img))
    return pixel_shuffle(balanced)
