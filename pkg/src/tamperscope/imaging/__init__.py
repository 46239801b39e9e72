from .blockdct import ZIGZAG, BlockDCTGrid, block_dct8, grid_to_image
from .bayer import (
    BAYER_PATTERNS,
    bilinear_demosaic,
    channel_masks,
    green_prediction_error,
    mosaic_from_rgb,
)
from .io import (
    jpeg_roundtrip,
    load_image,
    load_mask,
    save_heatmap_png,
    save_image,
    save_mask_png,
)
from .morphology import dilate, erode
from .ops import gaussian_blur, median_filter, resize_image, to_luma, upsample_nearest
from .wavelet import haar_decompose, haar_hh

__all__ = [
    "ZIGZAG",
    "BlockDCTGrid",
    "block_dct8",
    "grid_to_image",
    "BAYER_PATTERNS",
    "bilinear_demosaic",
    "channel_masks",
    "green_prediction_error",
    "mosaic_from_rgb",
    "jpeg_roundtrip",
    "load_image",
    "load_mask",
    "save_heatmap_png",
    "save_image",
    "save_mask_png",
    "dilate",
    "erode",
    "gaussian_blur",
    "median_filter",
    "resize_image",
    "to_luma",
    "upsample_nearest",
    "haar_decompose",
    "haar_hh",
]
