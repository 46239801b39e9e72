"""Binary morphology with square structuring elements.

Border convention: pixels outside the frame count as background, so
erosion strips a ``s // 2`` frame border off a full mask while dilation
never grows past the frame.
"""

import numpy as np
from scipy import ndimage

from ..validation import check_mask, check_odd


def _structure(size):
    size = check_odd(size, "structuring element size")
    return np.ones((size, size), dtype=bool)


def dilate(mask, size):
    mask = check_mask(mask)
    if size == 1:
        return mask.copy()
    out = ndimage.binary_dilation(mask > 0, structure=_structure(size), border_value=0)
    return out.astype(np.uint8) * 255


def erode(mask, size):
    mask = check_mask(mask)
    if size == 1:
        return mask.copy()
    out = ndimage.binary_erosion(mask > 0, structure=_structure(size), border_value=0)
    return out.astype(np.uint8) * 255
