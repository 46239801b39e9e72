import numpy as np
import pytest

from tamperscope.errors import InvalidInputError
from tamperscope.imaging import ZIGZAG, block_dct8, grid_to_image

from oracles import dct2_matrix


def test_constant_block_dc_only():
    c = 37.0
    grid = block_dct8(np.full((8, 8), c))
    coeffs = grid.coeffs[0]
    assert coeffs[0] == pytest.approx(8 * c)
    assert np.allclose(coeffs[1:], 0.0, atol=1e-9)


def test_level_shift_subtracts_128():
    grid = block_dct8(np.full((8, 8), 128.0), level_shift=True)
    assert np.allclose(grid.coeffs, 0.0, atol=1e-9)


def test_parseval(rng):
    img = rng.uniform(0, 255, (8, 8))
    grid = block_dct8(img)
    assert np.sum(grid.coeffs**2) == pytest.approx(np.sum(img**2), abs=1e-9)


def test_matches_cosine_definition(rng):
    img = rng.uniform(-50, 50, (8, 8))
    basis = dct2_matrix(8)
    expected = basis @ img @ basis.T
    grid = block_dct8(img)
    natural = np.empty(64)
    natural[ZIGZAG] = grid.coeffs[0]
    assert np.allclose(natural.reshape(8, 8), expected, atol=1e-9)


def test_roundtrip_property(rng):
    # 1000 random blocks in one grid: exact inverse within 1e-9
    img = rng.uniform(0, 255, (200, 320))  # 25 x 40 = 1000 blocks
    grid = block_dct8(img, level_shift=True)
    assert grid.n_blocks == 1000
    rec = grid_to_image(grid)
    assert np.max(np.abs(rec - img)) < 1e-9


def test_origin_offset_and_partial_blocks(rng):
    img = rng.uniform(0, 255, (27, 30))
    grid = block_dct8(img, origin_x=3, origin_y=2)
    assert (grid.blocks_high, grid.blocks_wide) == (3, 3)
    aligned = block_dct8(img[2:26, 3:27])
    assert np.allclose(grid.coeffs, aligned.coeffs)


def test_too_small_image_errors():
    with pytest.raises(InvalidInputError):
        block_dct8(np.zeros((7, 64)))
    with pytest.raises(InvalidInputError):
        block_dct8(np.zeros((64, 9)), origin_x=7, origin_y=0)  # only 2 columns left


def test_rejects_bad_origin():
    with pytest.raises(InvalidInputError):
        block_dct8(np.zeros((16, 16)), origin_x=8)
