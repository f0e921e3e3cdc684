"""File formats: portable tensors, 16-bit PGM mosaics, parameter checkpoints.

Portable tensor files start with one UTF-8 JSON line::

    {"dtype": "f32", "shape": [h, w], "msfa": "imec2x2", "wavelengths": [...]}

followed immediately by the little-endian flat float payload.  The ``msfa``
and ``wavelengths`` entries are null for tensors with no attached pattern.
Checkpoints use the same layout with a ``{"names", "shapes", "dtype"}``
header and one concatenated f64 payload.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DataError
from .msfa import BUILTIN_MSFAS, MsfaPattern, PlaneCube, RawImage, builtin_pattern

__all__ = [
    "write_tensor",
    "read_tensor",
    "save_raw",
    "load_raw",
    "save_cube",
    "load_cube",
    "write_pgm16",
    "read_pgm16",
    "save_checkpoint",
    "load_checkpoint",
]

_DTYPES = {"f32": "<f4", "f64": "<f8"}


def _pattern_header(pattern: MsfaPattern | None) -> dict:
    if pattern is None:
        return {"msfa": None, "wavelengths": None}
    return {"msfa": pattern.name, "wavelengths": pattern.wavelengths.tolist()}


def write_tensor(
    path, array: np.ndarray, pattern: MsfaPattern | None = None, dtype: str = "f32"
) -> None:
    array = np.asarray(array)
    header = {"dtype": dtype, "shape": list(array.shape)}
    header.update(_pattern_header(pattern))
    with open(path, "wb") as f:
        f.write((json.dumps(header) + "\n").encode("utf-8"))
        f.write(np.ascontiguousarray(array, dtype=_DTYPES[dtype]).tobytes())


def read_tensor(path) -> tuple[np.ndarray, dict]:
    """Read a portable tensor; returns (float64 array, header dict)."""
    with open(path, "rb") as f:
        line = f.readline()
        try:
            header = json.loads(line.decode("utf-8"))
            np_dtype = _DTYPES[header["dtype"]]
            shape = tuple(int(s) for s in header["shape"])
        except (ValueError, KeyError) as e:
            raise DataError(f"{path}: malformed tensor header: {e}") from None
        payload = f.read()
    expect = int(np.prod(shape)) * np.dtype(np_dtype).itemsize
    if len(payload) != expect:
        raise DataError(
            f"{path}: payload is {len(payload)} bytes, expected {expect}"
        )
    array = np.frombuffer(payload, dtype=np_dtype).reshape(shape).astype(np.float64)
    return array, header


def _resolve_pattern(header: dict, pattern: MsfaPattern | None) -> MsfaPattern:
    if pattern is not None:
        return builtin_pattern(pattern)
    name = header.get("msfa")
    if name in BUILTIN_MSFAS:
        return builtin_pattern(name)
    if name is not None and header.get("wavelengths"):
        # non-built-in pattern: reconstruct a row-major grid of matching size
        wl = np.asarray(header["wavelengths"], dtype=float)
        b = int(round(len(wl) ** 0.5))
        return MsfaPattern(name, np.arange(b * b).reshape(b, b), wl)
    raise DataError("file carries no known MSFA id; pass a pattern explicitly")


def save_raw(path, img: RawImage) -> None:
    write_tensor(path, img.data, img.pattern)


def load_raw(path, pattern: MsfaPattern | None = None) -> RawImage:
    array, header = read_tensor(path)
    if array.ndim != 2:
        raise DataError(f"{path}: expected a 2-d raw mosaic, got shape {array.shape}")
    return RawImage(_resolve_pattern(header, pattern), array)


def save_cube(path, cube: PlaneCube) -> None:
    write_tensor(path, cube.channels, cube.pattern)


def load_cube(path, pattern: MsfaPattern | None = None) -> PlaneCube:
    array, header = read_tensor(path)
    if array.ndim != 3:
        raise DataError(f"{path}: expected a 3-d cube, got shape {array.shape}")
    return PlaneCube(_resolve_pattern(header, pattern), array)


def write_pgm16(path, img: RawImage) -> None:
    """Export a mosaic as binary 16-bit PGM (big-endian samples, per netpbm)."""
    q = np.clip(np.rint(img.data * 65535.0), 0, 65535).astype(">u2")
    with open(path, "wb") as f:
        f.write(f"P5\n{img.width} {img.height}\n65535\n".encode("ascii"))
        f.write(q.tobytes())


def read_pgm16(path, pattern: MsfaPattern) -> RawImage:
    """Import a binary 16-bit PGM mosaic, normalizing values by 65535."""
    with open(path, "rb") as f:
        blob = f.read()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(blob) and blob[pos : pos + 1].isspace():
            pos += 1
        if blob[pos : pos + 1] == b"#":  # comment line
            pos = blob.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos : pos + 1].isspace():
            pos += 1
        fields.append(blob[start:pos])
    pos += 1  # single whitespace after maxval
    if fields[0] != b"P5":
        raise DataError(f"{path}: not a binary PGM file")
    width, height, maxval = (int(v) for v in fields[1:])
    if maxval != 65535:
        raise DataError(f"{path}: expected 16-bit PGM (maxval 65535), got {maxval}")
    data = np.frombuffer(blob, dtype=">u2", offset=pos, count=height * width)
    return RawImage.from_uint16(builtin_pattern(pattern), data.reshape(height, width))


def save_checkpoint(path, arrays: dict[str, np.ndarray], extra: dict | None = None):
    """Write named parameter arrays: JSON header line + flat f64 payload."""
    names = list(arrays)
    header = {
        "names": names,
        "shapes": {n: list(np.asarray(arrays[n]).shape) for n in names},
        "dtype": "f64",
    }
    if extra:
        header["extra"] = extra
    with open(path, "wb") as f:
        f.write((json.dumps(header) + "\n").encode("utf-8"))
        for n in names:
            f.write(np.ascontiguousarray(arrays[n], dtype="<f8").tobytes())


def load_checkpoint(path) -> tuple[dict[str, np.ndarray], dict]:
    """Read a checkpoint; returns ({name: array}, header)."""
    with open(path, "rb") as f:
        try:
            header = json.loads(f.readline().decode("utf-8"))
            names = header["names"]
            shapes = header["shapes"]
        except (ValueError, KeyError) as e:
            raise DataError(f"{path}: malformed checkpoint header: {e}") from None
        arrays = {}
        for n in names:
            shape = tuple(int(s) for s in shapes[n])
            count = int(np.prod(shape)) if shape else 1
            buf = f.read(count * 8)
            if len(buf) != count * 8:
                raise DataError(f"{path}: truncated payload at {n!r}")
            arrays[n] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
    return arrays, header


def ensure_parent(path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p
