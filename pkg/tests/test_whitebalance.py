"""Max-of-median white balance vs. explicit sorted-window oracles."""

import numpy as np
import pytest

from rawtex.errors import StructureError
from rawtex.msfa import PlaneCube, RawImage, imec2x2, imec5x5, pixel_shuffle, pixel_unshuffle
from rawtex.radiance import apply_band_gains
from rawtex.whitebalance import (
    ESTIMATE_FLOOR,
    IlluminationEstimate,
    estimate_illumination,
    median_filter_5x5,
    white_balance,
    white_balance_cube,
)


def median5x5_oracle(channel: np.ndarray) -> np.ndarray:
    """Explicit window median: replicate padding via clamped coordinates for
    images at least 5 wide, clipped windows (lower middle on even counts)
    otherwise."""
    h, w = channel.shape
    out = np.empty_like(channel)
    clipped = min(h, w) < 5
    for y in range(h):
        for x in range(w):
            vals = []
            for dy in range(-2, 3):
                for dx in range(-2, 3):
                    yy, xx = y + dy, x + dx
                    if clipped:
                        if 0 <= yy < h and 0 <= xx < w:
                            vals.append(channel[yy, xx])
                    else:
                        vals.append(channel[min(max(yy, 0), h - 1), min(max(xx, 0), w - 1)])
            vals.sort()
            out[y, x] = vals[(len(vals) - 1) // 2]
    return out


class TestEstimate:
    def test_constant_channel(self):
        cube = PlaneCube(imec2x2(), np.full((4, 6, 6), 0.3))
        est = estimate_illumination(cube)
        np.testing.assert_allclose(est.per_band, 0.3)

    def test_single_hot_pixel_suppressed(self):
        chans = np.full((4, 7, 7), 0.2)
        chans[1, 3, 3] = 2.0
        est = estimate_illumination(PlaneCube(imec2x2(), chans))
        np.testing.assert_allclose(est.per_band, 0.2)

    def test_random_9x9_matches_oracle(self):
        rng = np.random.default_rng(21)
        chan = rng.random((9, 9))
        np.testing.assert_array_equal(median_filter_5x5(chan), median5x5_oracle(chan))
        cube = PlaneCube(imec2x2(), rng.random((4, 9, 9)))
        expected = [median5x5_oracle(c).max() for c in cube.channels]
        np.testing.assert_allclose(
            estimate_illumination(cube).per_band, expected
        )

    def test_small_channel_clipped_windows(self):
        rng = np.random.default_rng(22)
        for side in (1, 2, 3, 4):
            chan = rng.random((side, side))
            np.testing.assert_array_equal(
                median_filter_5x5(chan), median5x5_oracle(chan)
            )

    def test_zero_channel_floored(self):
        cube = PlaneCube(imec2x2(), np.zeros((4, 6, 6)))
        est = estimate_illumination(cube)
        np.testing.assert_array_equal(est.per_band, ESTIMATE_FLOOR)

    def test_estimate_type_rejects_nonpositive(self):
        with pytest.raises(StructureError):
            IlluminationEstimate(np.array([1.0, 0.0]))


class TestWhiteBalance:
    def test_constant_image_maps_to_one(self):
        img = RawImage(imec2x2(), np.full((12, 12), 0.4))
        np.testing.assert_allclose(white_balance(img).data, 1.0)

    def test_per_band_scale_invariance(self):
        rng = np.random.default_rng(23)
        for pattern in (imec2x2(), imec5x5()):
            img = RawImage(pattern, rng.random((4 * pattern.width, 4 * pattern.width)))
            gains = rng.uniform(0.1, 3.0, pattern.n_bands)
            a = white_balance(img).data
            b = white_balance(apply_band_gains(img, gains)).data
            assert np.max(np.abs(a - b)) < 1e-6

    def test_matches_three_step_oracle(self):
        rng = np.random.default_rng(24)
        img = RawImage(imec2x2(), rng.random((14, 14)))
        cube = pixel_unshuffle(img)
        divided = np.stack(
            [c / max(median5x5_oracle(c).max(), ESTIMATE_FLOOR) for c in cube.channels]
        )
        expected = pixel_shuffle(PlaneCube(img.pattern, divided)).data
        np.testing.assert_allclose(white_balance(img).data, expected, rtol=0, atol=1e-15)

    def test_idempotent_up_to_tolerance(self):
        rng = np.random.default_rng(25)
        img = RawImage(imec2x2(), rng.random((16, 16)))
        once = white_balance(img)
        twice = white_balance(once)
        assert np.max(np.abs(twice.data - once.data)) < 1e-6

    def test_balanced_max_median_is_one(self):
        rng = np.random.default_rng(26)
        img = RawImage(imec2x2(), 0.2 + 0.8 * rng.random((20, 20)))
        balanced, _ = white_balance_cube(pixel_unshuffle(img))
        for chan in balanced.channels:
            assert median_filter_5x5(chan).max() == pytest.approx(1.0)

    def test_zero_band_stays_zero(self):
        data = np.ones((8, 8))
        data[0::2, 0::2] = 0.0  # band at (0,0) all zero
        out = white_balance(RawImage(imec2x2(), data))
        assert np.all(out.data[0::2, 0::2] == 0.0)
        assert np.all(out.data >= 0)
