"""Round-trips for the portable tensor, PGM, and checkpoint formats."""

import json

import numpy as np
import pytest

from rawtex.errors import DataError
from rawtex.io import (
    load_checkpoint,
    load_cube,
    load_raw,
    read_pgm16,
    read_tensor,
    save_checkpoint,
    save_cube,
    save_raw,
    write_pgm16,
    write_tensor,
)
from rawtex.msfa import PlaneCube, RawImage, imec2x2, imec5x5


def test_tensor_roundtrip_f32(tmp_path):
    rng = np.random.default_rng(41)
    a = rng.random((3, 4, 5))
    path = tmp_path / "t.bin"
    write_tensor(path, a)
    back, header = read_tensor(path)
    assert header["dtype"] == "f32" and header["shape"] == [3, 4, 5]
    np.testing.assert_allclose(back, a, atol=1e-7)


def test_header_is_single_json_line(tmp_path):
    path = tmp_path / "t.bin"
    write_tensor(path, np.zeros((2, 2)), imec2x2())
    with open(path, "rb") as f:
        header = json.loads(f.readline())
    assert header["msfa"] == "imec2x2"
    assert len(header["wavelengths"]) == 4


def test_raw_and_cube_roundtrip(tmp_path):
    rng = np.random.default_rng(42)
    img = RawImage(imec5x5(), rng.random((10, 10)))
    save_raw(tmp_path / "r.bin", img)
    back = load_raw(tmp_path / "r.bin")
    assert back.pattern.name == "imec5x5"
    np.testing.assert_allclose(back.data, img.data, atol=1e-7)

    cube = PlaneCube(imec2x2(), rng.random((4, 3, 3)))
    save_cube(tmp_path / "c.bin", cube)
    back = load_cube(tmp_path / "c.bin")
    np.testing.assert_allclose(back.channels, cube.channels, atol=1e-7)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "t.bin"
    write_tensor(path, np.zeros(8))
    blob = path.read_bytes()
    path.write_bytes(blob[:-4])
    with pytest.raises(DataError):
        read_tensor(path)


def test_pgm16_roundtrip_is_exact_on_quantized_values(tmp_path):
    rng = np.random.default_rng(43)
    quantized = rng.integers(0, 65536, size=(6, 8)).astype(np.float64) / 65535.0
    img = RawImage(imec2x2(), quantized)
    write_pgm16(tmp_path / "i.pgm", img)
    back = read_pgm16(tmp_path / "i.pgm", imec2x2())
    np.testing.assert_array_equal(back.data, img.data)


def test_pgm_rejects_8bit(tmp_path):
    path = tmp_path / "j.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes(4))
    with pytest.raises(DataError):
        read_pgm16(path, imec2x2())


def test_checkpoint_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(44)
    arrays = {"w": rng.standard_normal((3, 2)), "b": rng.standard_normal(5)}
    save_checkpoint(tmp_path / "ck.bin", arrays, extra={"step": 7})
    back, header = load_checkpoint(tmp_path / "ck.bin")
    assert header["extra"]["step"] == 7
    for name in arrays:
        np.testing.assert_array_equal(back[name], arrays[name])
