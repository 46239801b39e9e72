"""Pixel-domain primitives: color conversion, filtering, resampling."""

import numpy as np
from PIL import Image
from scipy import ndimage

from ..errors import InvalidInputError
from ..validation import check_image, check_odd

# ITU-R BT.601 luma weights
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def to_luma(img):
    """Convert a 1- or 3-channel image to its luminance plane (BT.601)."""
    arr = check_image(img)
    if arr.ndim == 2:
        return arr.copy()
    return arr @ _LUMA_WEIGHTS


def median_filter(img, k):
    """k x k median filter with edge replication at the borders."""
    arr = check_image(img)
    k = check_odd(k, "window size")
    if k < 3:
        raise InvalidInputError("median window must be at least 3")
    if arr.ndim == 2:
        return ndimage.median_filter(arr, size=k, mode="nearest")
    return np.stack(
        [ndimage.median_filter(arr[..., c], size=k, mode="nearest") for c in range(3)],
        axis=-1,
    )


def gaussian_blur(img, sigma, truncate=4.0):
    arr = check_image(img)
    if sigma <= 0:
        raise InvalidInputError("sigma must be positive")
    if arr.ndim == 2:
        return ndimage.gaussian_filter(arr, sigma, mode="nearest", truncate=truncate)
    return np.stack(
        [
            ndimage.gaussian_filter(arr[..., c], sigma, mode="nearest", truncate=truncate)
            for c in range(3)
        ],
        axis=-1,
    )


def upsample_nearest(block_map, factor, out_shape):
    """Nearest-neighbor upsample of a block map to pixel resolution.

    Remainder rows/columns not covered by complete blocks replicate the
    nearest block value.
    """
    up = np.repeat(np.repeat(np.asarray(block_map), factor, axis=0), factor, axis=1)
    h, w = out_shape
    pad_h = max(h - up.shape[0], 0)
    pad_w = max(w - up.shape[1], 0)
    if pad_h or pad_w:
        up = np.pad(up, ((0, pad_h), (0, pad_w)), mode="edge")
    return up[:h, :w]


def resize_image(img, factor, nearest=False):
    """Resize by a scale factor (bilinear; nearest keeps masks binary)."""
    arr = check_image(img)
    if factor <= 0:
        raise InvalidInputError("resize factor must be positive")
    h = max(int(round(arr.shape[0] * factor)), 1)
    w = max(int(round(arr.shape[1] * factor)), 1)
    resample = Image.Resampling.NEAREST if nearest else Image.Resampling.BILINEAR

    def _one(plane):
        pim = Image.fromarray(plane.astype(np.float32), mode="F")
        return np.asarray(pim.resize((w, h), resample=resample), dtype=np.float64)

    if arr.ndim == 2:
        return _one(arr)
    return np.stack([_one(arr[..., c]) for c in range(3)], axis=-1)


def percentile_normalize(values, percentile):
    """Scale non-negative scores by an upper percentile and clamp to [0, 1].

    When the percentile itself is zero (signal sparser than the percentile,
    e.g. a residual that vanishes on most of the frame) the maximum is used
    instead; an all-zero field maps to exact zeros.
    """
    values = np.asarray(values, dtype=np.float64)
    scale = np.percentile(values, percentile)
    if scale <= 1e-12:
        scale = values.max()
    if scale <= 1e-12:
        return np.zeros_like(values)
    return np.clip(values / scale, 0.0, 1.0)
