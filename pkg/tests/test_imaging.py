import numpy as np
import pytest

from tamperscope.errors import InvalidInputError
from tamperscope.imaging import (
    dilate,
    erode,
    haar_hh,
    jpeg_roundtrip,
    load_image,
    median_filter,
    save_heatmap_png,
    save_image,
    to_luma,
)
from tamperscope.imaging.ops import resize_image, upsample_nearest

from oracles import median_map, morph_map


# ---------------------------------------------------------------------------
# to_luma


def test_luma_white_pixel():
    img = np.full((2, 2, 3), 255.0)
    assert np.allclose(to_luma(img), 255.0)


def test_luma_red_pixel():
    img = np.zeros((1, 1, 3))
    img[0, 0, 0] = 255.0
    assert to_luma(img)[0, 0] == pytest.approx(76.245)


def test_luma_passthrough_single_channel(rng):
    img = rng.uniform(0, 255, (5, 7))
    out = to_luma(img)
    assert np.array_equal(out, img)
    out[0, 0] = -1  # must be a copy
    assert img[0, 0] != -1


def test_luma_rejects_two_channels():
    with pytest.raises(InvalidInputError):
        to_luma(np.zeros((4, 4, 2)))


# ---------------------------------------------------------------------------
# median filter


def test_median_constant_image():
    img = np.full((9, 9), 42.0)
    assert np.array_equal(median_filter(img, 3), img)


def test_median_rejects_single_outlier():
    img = np.zeros((7, 7))
    img[3, 3] = 255.0
    assert np.array_equal(median_filter(img, 3), np.zeros((7, 7)))


def test_median_matches_bruteforce_oracle(rng):
    img = rng.uniform(0, 255, (5, 5)).round()
    assert np.allclose(median_filter(img, 3), median_map(img, 3))
    img2 = rng.uniform(0, 255, (9, 8)).round()
    assert np.allclose(median_filter(img2, 5), median_map(img2, 5))


def test_median_rejects_even_or_small_window():
    img = np.zeros((5, 5))
    for k in (0, -3, 2, 4, 1):
        with pytest.raises(InvalidInputError):
            median_filter(img, k)


def test_median_idempotent_on_constant_and_step():
    step = np.zeros((12, 12))
    step[:, 6:] = 200.0
    once = median_filter(step, 3)
    assert np.array_equal(median_filter(once, 3), once)
    const = np.full((8, 8), 7.0)
    assert np.array_equal(median_filter(median_filter(const, 3), 3), const)


# ---------------------------------------------------------------------------
# haar


def test_haar_constant_is_zero():
    assert np.allclose(haar_hh(np.full((16, 16), 99.0)), 0.0)


def test_haar_2x2_definition(rng):
    a, b, c, d = rng.uniform(-10, 10, 4)
    tile = np.array([[a, b], [c, d]])
    assert haar_hh(tile)[0, 0] == pytest.approx((a - b - c + d) / 2)


def test_haar_gaussian_noise_preserves_sigma(rng):
    sigma = 3.5
    img = rng.normal(0, sigma, (256, 256))
    hh = haar_hh(img)
    assert hh.std() == pytest.approx(sigma, rel=0.10)


def test_haar_offset_invariance(rng):
    img = rng.uniform(0, 255, (33, 41))
    assert np.allclose(haar_hh(img), haar_hh(img + 17.0))


def test_haar_degenerate_input():
    with pytest.raises(InvalidInputError):
        haar_hh(np.zeros((1, 16)))
    with pytest.raises(InvalidInputError):
        haar_hh(np.zeros((16, 1)))


def test_haar_drops_odd_trailing():
    img = np.arange(35.0).reshape(5, 7)
    assert haar_hh(img).shape == (2, 3)


# ---------------------------------------------------------------------------
# morphology


def test_morph_empty_mask():
    empty = np.zeros((20, 20), dtype=np.uint8)
    assert np.array_equal(dilate(empty, 5), empty)
    assert np.array_equal(erode(empty, 5), empty)


def test_morph_full_mask():
    full = np.full((20, 20), 255, dtype=np.uint8)
    assert np.array_equal(dilate(full, 5), full)
    eroded = erode(full, 5)
    inner = np.zeros((20, 20), dtype=np.uint8)
    inner[2:-2, 2:-2] = 255
    assert np.array_equal(eroded, inner)


def test_morph_dilate_square_oracle():
    mask = np.zeros((40, 40), dtype=np.uint8)
    mask[15:25, 15:25] = 255
    out = dilate(mask, 5)
    expected = np.zeros((40, 40), dtype=np.uint8)
    expected[13:27, 13:27] = 255  # 14x14 square
    assert np.array_equal(out, expected)
    assert np.array_equal(out, morph_map(mask, "dilate", 5))


def test_morph_matches_oracle_on_random_masks(rng):
    for _ in range(5):
        mask = (rng.uniform(size=(12, 14)) > 0.6).astype(np.uint8) * 255
        for s in (1, 3, 5):
            assert np.array_equal(dilate(mask, s), morph_map(mask, "dilate", s))
            assert np.array_equal(erode(mask, s), morph_map(mask, "erode", s))


def test_morph_monotone(rng):
    for s in (3, 5, 7):
        mask = (rng.uniform(size=(16, 16)) > 0.5).astype(np.uint8) * 255
        er = erode(mask, s) > 0
        di = dilate(mask, s) > 0
        m = mask > 0
        assert np.all(~er | m)  # erode(m) subset of m
        assert np.all(~m | di)  # m subset of dilate(m)


def test_morph_rejects_even_se():
    with pytest.raises(InvalidInputError):
        dilate(np.zeros((4, 4), dtype=np.uint8), 4)


# ---------------------------------------------------------------------------
# jpeg roundtrip


def test_jpeg_constant_near_exact():
    img = np.full((32, 32), 128.0)
    out = jpeg_roundtrip(img, 90)
    assert out.shape == img.shape
    assert np.max(np.abs(out - img)) <= 1.0


def test_jpeg_quality_ordering(rng):
    img = np.clip(
        128 + 40 * np.sin(np.linspace(0, 20, 64))[None, :] + rng.normal(0, 12, (64, 64)), 0, 255
    ).round()
    mse50 = np.mean((img - jpeg_roundtrip(img, 50)) ** 2)
    mse95 = np.mean((img - jpeg_roundtrip(img, 95)) ** 2)
    assert mse50 >= mse95


def test_jpeg_recompression_converges(rng):
    img = np.clip(128 + rng.normal(0, 25, (96, 96)), 0, 255).round()
    once = jpeg_roundtrip(img, 75)
    twice = jpeg_roundtrip(once, 75)
    mse1 = np.mean((img - once) ** 2)
    mse2 = np.mean((once - twice) ** 2)
    assert mse2 <= mse1


def test_jpeg_preserves_shape_and_channels(rng):
    gray = rng.uniform(0, 255, (40, 56)).round()
    color = rng.uniform(0, 255, (40, 56, 3)).round()
    assert jpeg_roundtrip(gray, 80).shape == gray.shape
    assert jpeg_roundtrip(color, 80).shape == color.shape


def test_jpeg_rejects_bad_quality():
    img = np.zeros((16, 16))
    for q in (0, 101, -5):
        with pytest.raises(InvalidInputError):
            jpeg_roundtrip(img, q)


# ---------------------------------------------------------------------------
# io / resize / upsample


def test_png_roundtrip_lossless(tmp_path, rng):
    img = rng.integers(0, 256, (31, 47, 3)).astype(np.float64)
    path = tmp_path / "x.png"
    save_image(path, img)
    assert np.array_equal(load_image(path), img)


def test_heatmap_png_quantization(tmp_path):
    heat = np.linspace(0, 1, 64).reshape(8, 8)
    path = tmp_path / "h.png"
    save_heatmap_png(path, heat)
    decoded = load_image(path)
    assert np.array_equal(decoded, np.round(heat * 255))


def test_upsample_nearest_pads_edges():
    block = np.array([[1.0, 2.0], [3.0, 4.0]])
    up = upsample_nearest(block, 3, (7, 7))
    assert up.shape == (7, 7)
    assert up[0, 0] == 1 and up[6, 6] == 4
    assert up[6, 0] == 3  # bottom edge replicates the last block row


def test_resize_nearest_keeps_masks_binary(rng):
    mask = (rng.uniform(size=(64, 64)) > 0.7).astype(np.uint8) * 255
    small = resize_image(mask, 0.5, nearest=True)
    assert set(np.unique(small)) <= {0.0, 255.0}
