"""MSFA patterns, raw mosaic images, and the pixel shuffle/unshuffle operators.

A multispectral filter array (MSFA) tiles a B x B basic pattern of B^2
distinct band filters over the sensor, so a raw capture holds one band value
per pixel.  Everything else in this package is built on the exact, lossless
rearrangement between such a mosaic of size (m*B) x (m*B) and a B^2-channel
cube of size m x m.

Conventions (fixed so every downstream oracle is reproducible):

* ``band_grid[y % B][x % B]`` gives the band index at pixel ``(x, y)``;
  rows index y, columns index x.
* Built-in IMEC-style patterns number their bands row-major 0..B^2-1 and
  space the published wavelength range linearly across bands.
* Values are real radiance numbers normalized to [0, 1] at ingestion
  (16-bit integer input is divided by 65535); processing may push values
  above 1 but never below 0.

All types are immutable after construction and safe to share across
threads; the operators are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoordinateError, StructureError

__all__ = [
    "MsfaPattern",
    "RawImage",
    "PlaneCube",
    "imec2x2",
    "imec4x4",
    "imec5x5",
    "builtin_pattern",
    "BUILTIN_MSFAS",
    "band_at",
    "pixel_unshuffle",
    "pixel_shuffle",
    "mosaic",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class MsfaPattern:
    """A B x B basic pattern of band indices plus per-band center wavelengths.

    Parameters
    ----------
    name : str
        Identifier, e.g. ``"imec5x5"``.
    band_grid : array of int, shape (B, B)
        Band index of each cell; must be a bijection onto [0, B^2 - 1]
        (no redundant bands).
    wavelengths : array of float, shape (B^2,)
        Center wavelength in nm of each band, indexed by band number.
    """

    name: str
    band_grid: np.ndarray
    wavelengths: np.ndarray
    # cell (row j, col i) of each band, indexed by band number
    _cell_of_band: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.band_grid, dtype=np.intp)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise StructureError(f"band_grid must be square, got shape {grid.shape}")
        b = grid.shape[0]
        if sorted(grid.ravel().tolist()) != list(range(b * b)):
            raise StructureError("band_grid must be a bijection onto [0, B^2 - 1]")
        wl = np.asarray(self.wavelengths, dtype=np.float64)
        if wl.shape != (b * b,):
            raise StructureError(f"need {b * b} wavelengths, got shape {wl.shape}")
        if np.any(wl <= 0):
            raise StructureError("wavelengths must be strictly positive")
        object.__setattr__(self, "band_grid", _readonly(grid))
        object.__setattr__(self, "wavelengths", _readonly(wl))
        object.__setattr__(self, "_cell_of_band", _readonly(np.argsort(grid.ravel())))

    @property
    def width(self) -> int:
        """Basic pattern width B."""
        return self.band_grid.shape[0]

    @property
    def n_bands(self) -> int:
        """Number of bands B^2."""
        return self.band_grid.size

    def cell_of_band(self, band: int) -> tuple[int, int]:
        """Return (row j, col i) of ``band`` inside the basic pattern."""
        c = int(self._cell_of_band[band])
        return divmod(c, self.width)


def _linspace_pattern(name: str, b: int, lo_nm: float, hi_nm: float) -> MsfaPattern:
    grid = np.arange(b * b).reshape(b, b)
    return MsfaPattern(name, grid, np.linspace(lo_nm, hi_nm, b * b))


def imec2x2() -> MsfaPattern:
    """IMEC-style VIS-NIR 2x2 pattern, 465-811 nm."""
    return _linspace_pattern("imec2x2", 2, 465.0, 811.0)


def imec4x4() -> MsfaPattern:
    """IMEC-style VIS 4x4 pattern, 469-633 nm."""
    return _linspace_pattern("imec4x4", 4, 469.0, 633.0)


def imec5x5() -> MsfaPattern:
    """IMEC-style NIR 5x5 pattern, 678-960 nm."""
    return _linspace_pattern("imec5x5", 5, 678.0, 960.0)


BUILTIN_MSFAS = {"imec2x2": imec2x2, "imec4x4": imec4x4, "imec5x5": imec5x5}


def builtin_pattern(name_or_pattern) -> MsfaPattern:
    """Resolve a built-in pattern name; pass an MsfaPattern through unchanged."""
    if isinstance(name_or_pattern, MsfaPattern):
        return name_or_pattern
    try:
        return BUILTIN_MSFAS[name_or_pattern]()
    except KeyError:
        raise StructureError(
            f"unknown MSFA {name_or_pattern!r}; choose from {sorted(BUILTIN_MSFAS)}"
        ) from None


@dataclass(frozen=True, eq=False)
class RawImage:
    """Single-channel mosaic whose pixel (x, y) holds band ``band_at(x, y)``.

    Height and width must both be exact multiples of the pattern width B
    (non-square images are allowed).  Values are non-negative reals.
    """

    pattern: MsfaPattern
    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        b = self.pattern.width
        if d.ndim != 2:
            raise StructureError(f"raw image must be 2-d, got shape {d.shape}")
        if d.shape[0] % b or d.shape[1] % b:
            raise StructureError(
                f"raw image shape {d.shape} is not a multiple of pattern width {b}"
            )
        if np.any(d < 0):
            raise StructureError("raw image values must be non-negative")
        object.__setattr__(self, "data", _readonly(d))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_uint16(cls, pattern: MsfaPattern, values: np.ndarray) -> "RawImage":
        """Ingest 16-bit integer data, normalizing to [0, 1] by 65535."""
        return cls(pattern, np.asarray(values, dtype=np.float64) / 65535.0)


@dataclass(frozen=True, eq=False)
class PlaneCube:
    """B^2-channel image with channels ordered by band index.

    The unshuffled form of a raw mosaic has side ``m = X / B``; the same type
    also carries fully-defined cubes at mosaic resolution (every channel then
    has side m*B), which is what :func:`mosaic` consumes.
    """

    pattern: MsfaPattern
    channels: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.channels, dtype=np.float64)
        n = self.pattern.n_bands
        if c.ndim != 3 or c.shape[0] != n:
            raise StructureError(
                f"cube must have exactly {n} channels, got shape {c.shape}"
            )
        object.__setattr__(self, "channels", _readonly(c))

    @property
    def height(self) -> int:
        return self.channels.shape[1]

    @property
    def width(self) -> int:
        return self.channels.shape[2]

    @property
    def side(self) -> int:
        if self.height != self.width:
            raise StructureError("cube is not square; use height/width")
        return self.height


def band_at(img: RawImage, x: int, y: int) -> int:
    """Band index sampled at pixel (x, y) of a raw mosaic."""
    if not (0 <= x < img.width and 0 <= y < img.height):
        raise CoordinateError(
            f"pixel ({x}, {y}) outside {img.width}x{img.height} image"
        )
    b = img.pattern.width
    return int(img.pattern.band_grid[y % b, x % b])


def _tiled_band_index(pattern: MsfaPattern, height: int, width: int) -> np.ndarray:
    b = pattern.width
    return np.tile(pattern.band_grid, (height // b, width // b))


def pixel_unshuffle(img: RawImage) -> PlaneCube:
    """Rearrange an (m*B) x (m*B) mosaic into a B^2-channel m x m cube.

    Channel ``band_grid[j][i]`` at (x, y) takes the mosaic value at
    (x*B + i, y*B + j); no value is lost or duplicated.
    """
    b = img.pattern.width
    my, mx = img.height // b, img.width // b
    # (my, B, mx, B) -> cells-first (B*B, my, mx), cell index = j*B + i
    blocks = (
        img.data.reshape(my, b, mx, b).transpose(1, 3, 0, 2).reshape(b * b, my, mx)
    )
    return PlaneCube(img.pattern, blocks[img.pattern._cell_of_band])


def pixel_shuffle(cube: PlaneCube) -> RawImage:
    """Exact inverse of :func:`pixel_unshuffle`."""
    b = cube.pattern.width
    my, mx = cube.height, cube.width
    # place channel band_grid[j][i] back at cell (j, i)
    blocks = cube.channels[cube.pattern.band_grid.ravel()].reshape(b, b, my, mx)
    data = blocks.transpose(2, 0, 3, 1).reshape(my * b, mx * b)
    return RawImage(cube.pattern, data)


def mosaic(cube: PlaneCube) -> RawImage:
    """Spatio-spectrally subsample a fully-defined cube into a raw mosaic.

    The cube's channels live at mosaic resolution; the output at pixel p is
    the value of channel ``band_at(p)`` at p.
    """
    b = cube.pattern.width
    if cube.height % b or cube.width % b:
        raise StructureError(
            f"cube side {cube.height}x{cube.width} is not a multiple of {b}"
        )
    idx = _tiled_band_index(cube.pattern, cube.height, cube.width)
    data = np.take_along_axis(cube.channels, idx[None], axis=0)[0]
    return RawImage(cube.pattern, data)
