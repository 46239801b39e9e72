"""Decoding, encoding, and the JPEG round-trip primitive.

PNG and baseline JPEG are handled through Pillow.  Pillow's ``quality``
parameter scales the standard Annex-K quantization tables with the
conventional libjpeg formula (scale = 5000/q below 50, 200 - 2q above),
which is exactly the contract the detectors assume.
"""

import io

import numpy as np
from PIL import Image

from ..errors import InvalidInputError
from ..validation import check_eight_bit, check_heatmap, check_mask


def load_image(path):
    """Decode a PNG or JPEG file into a float image on the 0-255 scale.

    Grayscale sources yield (H, W); everything else is converted to RGB
    and yields (H, W, 3).
    """
    with Image.open(path) as im:
        if im.mode in ("1", "L", "I", "I;16", "F"):
            im = im.convert("L")
        elif im.mode != "RGB":
            im = im.convert("RGB")
        return np.asarray(im, dtype=np.float64)


def load_mask(path):
    """Decode a ground-truth mask PNG; any value above 127 counts as manipulated."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return check_mask(np.where(arr > 127, 255, 0).astype(np.uint8))


def _to_uint8(img):
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def save_image(path, img, jpeg_quality=None):
    """Write an image as PNG, or as baseline JPEG when a quality is given."""
    arr = _to_uint8(check_eight_bit(img))
    pim = Image.fromarray(arr, mode="L" if arr.ndim == 2 else "RGB")
    if jpeg_quality is None:
        pim.save(path, format="PNG")
    else:
        q = int(jpeg_quality)
        if not 1 <= q <= 100:
            raise InvalidInputError(f"jpeg quality {q} outside 1..100")
        pim.save(path, format="JPEG", quality=q, subsampling=0)


def save_heatmap_png(path, heat):
    """Store a heatmap as 8-bit grayscale PNG (score quantized to 0..255)."""
    arr = np.round(check_heatmap(heat) * 255.0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")


def save_mask_png(path, mask):
    Image.fromarray(check_mask(mask), mode="L").save(path, format="PNG")


def jpeg_roundtrip(img, quality):
    """Baseline JPEG encode at the given quality followed by decode.

    Input must be 8-bit representable with 1 or 3 channels; the output has
    the same dimensions and channel count.  Chroma subsampling is pinned to
    4:4:4 so the round-trip is independent of Pillow's quality-dependent
    default.
    """
    quality = int(quality)
    if not 1 <= quality <= 100:
        raise InvalidInputError(f"jpeg quality {quality} outside 1..100")
    arr = _to_uint8(check_eight_bit(img))
    pim = Image.fromarray(arr, mode="L" if arr.ndim == 2 else "RGB")
    buf = io.BytesIO()
    pim.save(buf, format="JPEG", quality=quality, subsampling=0)
    buf.seek(0)
    with Image.open(buf) as dec:
        out = np.asarray(dec, dtype=np.float64)
    return out
