"""8x8 block DCT in JPEG conventions.

Coefficients are stored per block in zig-zag order so that quantization
tables and band indices line up with the JPEG literature: index 0 is DC,
indices 1..63 walk the AC bands from low to high frequency.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

from ..errors import InvalidInputError
from ..validation import check_image

# Standard JPEG zig-zag scan: ZIGZAG[k] is the row-major position of the
# k-th zig-zag coefficient inside an 8x8 block.
ZIGZAG = np.array([
     0,  1,  8, 16,  9,  2,  3, 10,
    17, 24, 32, 25, 18, 11,  4,  5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13,  6,  7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
])

_UNZIGZAG = np.argsort(ZIGZAG)


@dataclass
class BlockDCTGrid:
    """DCT coefficients of all complete 8x8 blocks of an image.

    coeffs has shape (blocks_high * blocks_wide, 64) in zig-zag order,
    blocks in row-major grid order.
    """

    blocks_wide: int
    blocks_high: int
    origin_x: int
    origin_y: int
    level_shifted: bool
    coeffs: np.ndarray

    @property
    def n_blocks(self):
        return self.blocks_wide * self.blocks_high

    def band(self, j):
        """All blocks' coefficient at zig-zag index j."""
        return self.coeffs[:, j]

    def block_grid(self):
        """Coefficients reshaped to (blocks_high, blocks_wide, 64)."""
        return self.coeffs.reshape(self.blocks_high, self.blocks_wide, 64)


def block_dct8(img, origin_x=0, origin_y=0, level_shift=False):
    """Orthonormal 2-D DCT-II over every complete 8x8 block.

    The grid starts at (origin_x, origin_y); partial border blocks are
    discarded.  With level_shift the JPEG convention of subtracting 128
    before the transform is applied.
    """
    arr = check_image(img)
    if arr.ndim != 2:
        raise InvalidInputError("block DCT expects a single-channel image")
    if not (0 <= origin_x < 8 and 0 <= origin_y < 8):
        raise InvalidInputError("grid origin must lie in [0, 8)")
    sub = arr[origin_y:, origin_x:]
    bh, bw = sub.shape[0] // 8, sub.shape[1] // 8
    if bh < 1 or bw < 1:
        raise InvalidInputError("image holds no complete 8x8 block at this origin")
    tiles = sub[: bh * 8, : bw * 8].reshape(bh, 8, bw, 8).transpose(0, 2, 1, 3)
    if level_shift:
        tiles = tiles - 128.0
    coeffs = scipy.fft.dctn(tiles, type=2, norm="ortho", axes=(-2, -1))
    coeffs = coeffs.reshape(bh * bw, 64)[:, ZIGZAG]
    return BlockDCTGrid(
        blocks_wide=bw,
        blocks_high=bh,
        origin_x=origin_x,
        origin_y=origin_y,
        level_shifted=level_shift,
        coeffs=coeffs,
    )


def grid_to_image(grid):
    """Inverse transform of a full grid back to pixel samples.

    Returns the (blocks_high*8, blocks_wide*8) pixel area covered by the
    grid; the level shift is undone when the grid was built with one.
    """
    natural = grid.coeffs[:, _UNZIGZAG].reshape(grid.blocks_high, grid.blocks_wide, 8, 8)
    tiles = scipy.fft.idctn(natural, type=2, norm="ortho", axes=(-2, -1))
    if grid.level_shifted:
        tiles = tiles + 128.0
    return tiles.transpose(0, 2, 1, 3).reshape(grid.blocks_high * 8, grid.blocks_wide * 8)
