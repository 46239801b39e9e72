"""Input validation helpers.

Images travel through the toolkit as float64 numpy arrays on the 0-255
scale: shape (H, W) for single-channel data, (H, W, 3) for color.
Heatmaps are float64 (H, W) in [0, 1]; ground-truth masks are uint8
(H, W) with values in {0, 255}.
"""

import numpy as np

from .errors import InvalidInputError


def check_image(img, name="image"):
    """Coerce to a float64 image array and check basic invariants."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim not in (2, 3):
        raise InvalidInputError(f"{name}: expected a 2-D or 3-D array, got ndim={arr.ndim}")
    if arr.ndim == 3 and arr.shape[2] != 3:
        raise InvalidInputError(
            f"{name}: unsupported channel count {arr.shape[2]} (expected 1 or 3)"
        )
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name}: empty image {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains non-finite samples")
    return arr


def check_color_image(img, name="image"):
    arr = check_image(img, name)
    if arr.ndim != 3:
        raise InvalidInputError(f"{name}: a 3-channel image is required")
    return arr


def check_min_size(img, min_h, min_w, name="image"):
    if img.shape[0] < min_h or img.shape[1] < min_w:
        raise InvalidInputError(
            f"{name}: {img.shape[1]}x{img.shape[0]} is smaller than the "
            f"required {min_w}x{min_h}"
        )
    return img


def check_eight_bit(img, name="image"):
    """Require samples representable as 8-bit values (0..255)."""
    arr = check_image(img, name)
    if arr.min() < -0.5 or arr.max() > 255.5:
        raise InvalidInputError(f"{name}: samples outside the 0-255 range")
    return arr


def check_mask(mask, name="mask"):
    """Coerce to a binary uint8 mask with values in {0, 255}."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if arr.dtype == bool:
        return arr.astype(np.uint8) * 255
    vals = np.unique(arr)
    if not np.all(np.isin(vals, (0, 255))):
        raise InvalidInputError(f"{name}: values must be 0 or 255, got {vals[:8]}")
    return arr.astype(np.uint8)


def check_heatmap(heat, name="heatmap"):
    arr = np.asarray(heat, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains non-finite scores")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise InvalidInputError(f"{name}: scores must lie in [0, 1]")
    return arr


def check_odd(value, name):
    value = int(value)
    if value < 1 or value % 2 == 0:
        raise InvalidInputError(f"{name} must be an odd positive integer, got {value}")
    return value


def check_same_shape(a, b, name_a="first", name_b="second"):
    if a.shape[:2] != b.shape[:2]:
        raise InvalidInputError(
            f"{name_a} {a.shape[:2]} and {name_b} {b.shape[:2]} dimensions differ"
        )
