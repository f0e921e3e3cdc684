"""Radiance simulation: illuminants, scene rendering, textures, patches.

Scenes are reflectance cubes sampled at the band center wavelengths; a raw
capture under an illuminant is the mosaic of the scene multiplied, per
pixel, by the illumination value of that pixel's band.  Real spectral power
curves are not bundled; the built-in "warm" (rising toward the NIR, A-like)
and "daylight" (flat with a mild blue lift, D65-like) illuminants are
synthetic stand-ins with those qualitative shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DataError, SpectralRangeError, StructureError
from .msfa import MsfaPattern, PlaneCube, RawImage, mosaic

__all__ = [
    "Illuminant",
    "SceneCube",
    "PatchSet",
    "flat_white",
    "warm",
    "daylight",
    "builtin_illuminant",
    "BUILTIN_ILLUMINANTS",
    "illuminant_vector",
    "apply_band_gains",
    "render_raw",
    "synth_textures",
    "extract_patches",
    "concat_patch_sets",
]


@dataclass(frozen=True, eq=False)
class Illuminant:
    """Relative spectral power distribution sampled at discrete wavelengths."""

    name: str
    samples: tuple

    def __post_init__(self):
        pts = tuple((float(w), float(p)) for w, p in self.samples)
        if len(pts) < 2:
            raise StructureError("illuminant needs at least 2 samples")
        wl = np.array([w for w, _ in pts])
        pw = np.array([p for _, p in pts])
        if np.any(np.diff(wl) <= 0):
            raise StructureError("illuminant wavelengths must be strictly increasing")
        if np.any(pw < 0):
            raise StructureError("illuminant powers must be non-negative")
        object.__setattr__(self, "samples", pts)

    @property
    def wavelengths(self) -> np.ndarray:
        return np.array([w for w, _ in self.samples])

    @property
    def powers(self) -> np.ndarray:
        return np.array([p for _, p in self.samples])


def flat_white() -> Illuminant:
    return Illuminant("flat-white", ((400.0, 1.0), (1000.0, 1.0)))


def warm() -> Illuminant:
    """Stand-in for an incandescent-like source: power rises steadily with wavelength."""
    wl = np.arange(400.0, 1001.0, 50.0)
    pw = 0.04 + 0.96 * ((wl - 400.0) / 600.0) ** 1.6
    return Illuminant("warm", tuple(zip(wl, pw)))


def daylight() -> Illuminant:
    """Stand-in for a daylight-like source: nearly flat with a mild blue lift."""
    wl = np.arange(400.0, 1001.0, 50.0)
    pw = 0.9 + 0.25 * np.exp(-(((wl - 440.0) / 110.0) ** 2))
    return Illuminant("daylight", tuple(zip(wl, pw)))


BUILTIN_ILLUMINANTS = {
    "flat-white": flat_white,
    "warm": warm,
    "daylight": daylight,
}


def builtin_illuminant(name_or_illuminant) -> Illuminant:
    if isinstance(name_or_illuminant, Illuminant):
        return name_or_illuminant
    try:
        return BUILTIN_ILLUMINANTS[name_or_illuminant]()
    except KeyError:
        raise DataError(
            f"unknown illuminant {name_or_illuminant!r}; "
            f"choose from {sorted(BUILTIN_ILLUMINANTS)}"
        ) from None


def illuminant_vector(ill: Illuminant, pattern: MsfaPattern) -> np.ndarray:
    """Per-band illumination: the RSPD interpolated at each band center,
    rescaled so the largest band value is 1."""
    wl = ill.wavelengths
    lo, hi = wl[0], wl[-1]
    centers = pattern.wavelengths
    if np.any(centers < lo) or np.any(centers > hi):
        raise SpectralRangeError(
            f"band centers outside sampled range [{lo}, {hi}] nm"
        )
    v = np.interp(centers, wl, ill.powers)
    peak = v.max()
    if peak <= 0:
        raise SpectralRangeError("illuminant has zero power at every band center")
    return v / peak


@dataclass(frozen=True, eq=False)
class SceneCube:
    """Reflectance planes in [0, 1] at full resolution, one per band."""

    pattern: MsfaPattern
    channels: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.channels, dtype=np.float64)
        if c.ndim != 3 or c.shape[0] != self.pattern.n_bands:
            raise StructureError(
                f"scene must have {self.pattern.n_bands} channels, got {c.shape}"
            )
        if c.min() < 0 or c.max() > 1:
            raise StructureError("reflectance values must lie in [0, 1]")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "channels", c)

    @property
    def resolution(self) -> tuple[int, int]:
        return self.channels.shape[1], self.channels.shape[2]

    def as_cube(self) -> PlaneCube:
        return PlaneCube(self.pattern, self.channels)


def apply_band_gains(img: RawImage, gains: np.ndarray) -> RawImage:
    """Multiply every pixel by the gain of its band (tiled Hadamard product)."""
    gains = np.asarray(gains, dtype=np.float64)
    if gains.shape != (img.pattern.n_bands,):
        raise StructureError(
            f"need {img.pattern.n_bands} gains, got shape {gains.shape}"
        )
    b = img.pattern.width
    tiled = np.tile(
        gains[img.pattern.band_grid], (img.height // b, img.width // b)
    )
    return RawImage(img.pattern, img.data * tiled)


def render_raw(scene: SceneCube, ill: Illuminant) -> RawImage:
    """Raw radiance of a scene under an illuminant (narrow-band model)."""
    gains = illuminant_vector(ill, scene.pattern)
    return apply_band_gains(mosaic(scene.as_cube()), gains)


def _value_noise(rng: np.random.Generator, res: tuple[int, int], cells: int):
    """Bilinearly interpolated random grid, values in [0, 1]."""
    h, w = res
    grid = rng.random((cells + 1, cells + 1))
    ys = np.linspace(0, cells, h)
    xs = np.linspace(0, cells, w)
    y0 = np.minimum(ys.astype(int), cells - 1)
    x0 = np.minimum(xs.astype(int), cells - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    g00 = grid[np.ix_(y0, x0)]
    g01 = grid[np.ix_(y0, x0 + 1)]
    g10 = grid[np.ix_(y0 + 1, x0)]
    g11 = grid[np.ix_(y0 + 1, x0 + 1)]
    return (
        g00 * (1 - fy) * (1 - fx)
        + g01 * (1 - fy) * fx
        + g10 * fy * (1 - fx)
        + g11 * fy * fx
    )


def synth_textures(
    pattern: MsfaPattern, num_classes: int, resolution: int, seed: int
) -> list[SceneCube]:
    """Deterministic procedural texture scenes, one per class.

    Each class mixes two oriented sinusoidal gratings, a value-noise field,
    and a checkerboard, with band-dependent mixing weights and a distinct
    per-band reflectance level profile, so classes differ both in spatial
    texture and in how texture is distributed across bands.
    """
    if num_classes < 1:
        raise DataError("num_classes must be >= 1")
    if resolution % pattern.width:
        raise StructureError(
            f"resolution {resolution} is not a multiple of pattern width "
            f"{pattern.width}"
        )
    n_bands = pattern.n_bands
    yy, xx = np.mgrid[0:resolution, 0:resolution] / float(resolution)
    scenes = []
    for c in range(num_classes):
        rng = np.random.default_rng(np.random.SeedSequence([seed, c]))
        theta = np.pi * (c / max(num_classes, 1)) + rng.uniform(-0.1, 0.1)
        freq1 = 4.0 + 3.0 * c + rng.uniform(0, 2)
        freq2 = freq1 * rng.uniform(1.6, 2.4)
        phase1, phase2 = rng.uniform(0, 2 * np.pi, size=2)
        u = np.cos(theta) * xx + np.sin(theta) * yy
        v = -np.sin(theta) * xx + np.cos(theta) * yy
        grating1 = 0.5 + 0.5 * np.sin(2 * np.pi * freq1 * u + phase1)
        grating2 = 0.5 + 0.5 * np.sin(2 * np.pi * freq2 * v + phase2)
        noise = _value_noise(rng, (resolution, resolution), cells=int(8 + 4 * (c % 3)))
        cells = 2 * (2 + c % 4)
        checker = (
            (np.floor(xx * cells) + np.floor(yy * cells)) % 2 * 0.5 + 0.25
        )
        components = np.stack([grating1, grating2, noise, checker])

        # band-dependent mixing: which texture dominates which band is a
        # class signature
        bands = np.arange(n_bands) / n_bands
        rho = rng.uniform(0, 1)
        mix = np.stack(
            [
                0.5 + 0.5 * np.sin(2 * np.pi * (bands + rho)),
                0.5 + 0.5 * np.cos(2 * np.pi * (bands * (1 + c % 3) + rho)),
                np.full(n_bands, 0.4),
                0.5 + 0.5 * np.sin(4 * np.pi * bands + rho * np.pi),
            ]
        )
        mix /= mix.sum(axis=0, keepdims=True)
        textured = np.tensordot(mix.T, components, axes=1)  # (n_bands, h, w)

        # distinct per-band reflectance levels
        level = 0.35 + 0.6 * (
            0.5 + 0.5 * np.sin(2 * np.pi * bands * (1 + c % 4) + c)
        )
        level = level / level.max()
        planes = np.clip(
            level[:, None, None] * (0.15 + 0.85 * textured), 0.0, 1.0
        )
        scenes.append(SceneCube(pattern, planes))
    return scenes


@dataclass(frozen=True, eq=False)
class PatchSet:
    """A labelled collection of same-size raw patches from one illuminant."""

    patches: tuple
    labels: np.ndarray
    role: str
    illuminant: str = ""

    def __post_init__(self):
        patches = tuple(self.patches)
        labels = np.asarray(self.labels, dtype=np.intp)
        if labels.shape != (len(patches),):
            raise DataError(
                f"{len(patches)} patches but {labels.shape} labels"
            )
        if self.role not in ("train", "validation", "test"):
            raise DataError(f"unknown role {self.role!r}")
        if patches:
            first = patches[0]
            for p in patches:
                if p.pattern is not first.pattern and not np.array_equal(
                    p.pattern.band_grid, first.pattern.band_grid
                ):
                    raise DataError("patches mix different MSFA patterns")
                if (p.height, p.width) != (first.height, first.width):
                    raise DataError("patches mix different sizes")
        object.__setattr__(self, "patches", patches)
        labels = labels.copy()
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.patches)

    @property
    def pattern(self):
        return self.patches[0].pattern

    def stack(self) -> np.ndarray:
        """Patch values as one (n, h, w) array."""
        return np.stack([p.data for p in self.patches])


def concat_patch_sets(sets: list[PatchSet]) -> PatchSet:
    if not sets:
        raise DataError("no patch sets to concatenate")
    patches = [p for s in sets for p in s.patches]
    labels = np.concatenate([s.labels for s in sets])
    roles = {s.role for s in sets}
    names = {s.illuminant for s in sets}
    if len(roles) != 1:
        raise DataError(f"cannot concatenate mixed roles {sorted(roles)}")
    return PatchSet(
        tuple(patches), labels, roles.pop(), names.pop() if len(names) == 1 else ""
    )


def extract_patches(
    img: RawImage,
    patch_size: int,
    split: str,
    label: int = 0,
    illuminant: str = "",
) -> PatchSet:
    """Non-overlapping pattern-aligned square tiles from one horizontal half.

    The image is split into a top and a bottom half; tiles start on basic
    pattern boundaries, so every patch keeps the original band map.  Top
    patches carry the train role, bottom ones the test role.
    """
    b = img.pattern.width
    if patch_size % b:
        raise AlignmentError(
            f"patch size {patch_size} is not a multiple of pattern width {b}"
        )
    if split not in ("top", "bottom"):
        raise DataError(f"split must be 'top' or 'bottom', got {split!r}")
    half = img.height // 2
    if split == "top":
        row_begin, row_end, role = 0, half, "train"
    else:
        row_begin, row_end, role = -(-half // b) * b, img.height, "test"
    if patch_size > (row_end - row_begin) or patch_size > img.width:
        raise DataError(
            f"patch size {patch_size} exceeds the {split} sub-image extent"
        )
    patches = []
    for y in range(row_begin, row_end - patch_size + 1, patch_size):
        for x in range(0, img.width - patch_size + 1, patch_size):
            tile = img.data[y : y + patch_size, x : x + patch_size]
            patches.append(RawImage(img.pattern, tile))
    labels = np.full(len(patches), label, dtype=np.intp)
    return PatchSet(tuple(patches), labels, role, illuminant)
