"""Bayer mosaic sampling and bilinear demosaicing.

Bilinear interpolation is the reference kernel on both the synthesis and
the analysis side: green is the average of the 4 axial neighbors, red and
blue average their 2 or 4 nearest same-color samples.  Normalizing the
kernel response by the sampled-position mask keeps borders well defined.
"""

import numpy as np
from scipy.signal import convolve2d

from ..errors import InvalidInputError
from ..validation import check_color_image

# Parity layout (y % 2, x % 2) -> channel index, in tie-break priority order.
BAYER_PATTERNS = {
    "RGGB": np.array([[0, 1], [1, 2]]),
    "GRBG": np.array([[1, 0], [2, 1]]),
    "GBRG": np.array([[1, 2], [0, 1]]),
    "BGGR": np.array([[2, 1], [1, 0]]),
}

_KERNEL_G = np.array([[0.0, 1, 0], [1, 4, 1], [0, 1, 0]])
_KERNEL_RB = np.array([[1.0, 2, 1], [2, 4, 2], [1, 2, 1]])
_AXIAL = np.array([[0.0, 1, 0], [1, 0, 1], [0, 1, 0]])
_DIAGONAL = np.array([[1.0, 0, 1], [0, 0, 0], [1, 0, 1]])


def _pattern_layout(pattern):
    try:
        return BAYER_PATTERNS[pattern]
    except KeyError:
        raise InvalidInputError(f"unknown bayer pattern {pattern!r}") from None


def channel_masks(pattern, height, width):
    """Boolean (3, H, W) masks of where each channel is sensed."""
    layout = _pattern_layout(pattern)
    masks = np.zeros((3, height, width), dtype=bool)
    for dy in range(2):
        for dx in range(2):
            masks[layout[dy, dx], dy::2, dx::2] = True
    return masks


def mosaic_from_rgb(img, pattern):
    """Subsample an RGB image to the single-plane mosaic of a pattern."""
    arr = check_color_image(img)
    masks = channel_masks(pattern, arr.shape[0], arr.shape[1])
    plane = np.zeros(arr.shape[:2])
    for c in range(3):
        plane[masks[c]] = arr[..., c][masks[c]]
    return plane


def _masked_interp(plane, mask, kernel):
    num = convolve2d(plane * mask, kernel, mode="same")
    den = convolve2d(mask.astype(np.float64), kernel, mode="same")
    return num / np.maximum(den, 1e-12)


def bilinear_demosaic(mosaic, pattern):
    """Reconstruct RGB from a mosaic plane with bilinear interpolation."""
    plane = np.asarray(mosaic, dtype=np.float64)
    if plane.ndim != 2:
        raise InvalidInputError("mosaic must be a single plane")
    masks = channel_masks(pattern, plane.shape[0], plane.shape[1])
    out = np.empty(plane.shape + (3,))
    for c, kernel in ((0, _KERNEL_RB), (1, _KERNEL_G), (2, _KERNEL_RB)):
        out[..., c] = _masked_interp(plane, masks[c], kernel)
    return out


def green_prediction_error(img, pattern):
    """Green channel minus its bilinear prediction from acquired positions.

    The prediction of every pixel uses acquired green samples only: the 4
    axial neighbors at interpolated sites, the 4 diagonal (acquired)
    neighbors at acquired sites.  On bilinear-demosaiced content the error
    vanishes at interpolated sites, which is the asymmetry the CFA
    detectors measure.

    Returns (error, acquired_green_mask).
    """
    arr = check_color_image(img)
    green = arr[..., 1]
    acquired = channel_masks(pattern, arr.shape[0], arr.shape[1])[1]
    pred_interp = _masked_interp(green, acquired, _AXIAL)
    pred_acquired = _masked_interp(green, acquired, _DIAGONAL)
    pred = np.where(acquired, pred_acquired, pred_interp)
    return green - pred, acquired
