"""Compression-artifact detectors: blocking grid, quantization residual, ELA."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..imaging.blockdct import BlockDCTGrid, block_dct8
from ..imaging.io import jpeg_roundtrip
from ..imaging.blockdct import ZIGZAG
from ..imaging.ops import percentile_normalize, upsample_nearest
from ..validation import check_min_size
from .base import BaseDetector

# Annex-K luminance quantization table (row-major).
STANDARD_LUMA_TABLE = np.array([
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
], dtype=np.int64)


def quant_table_for_quality(quality):
    """Standard luminance table scaled by the conventional quality formula.

    Returned in zig-zag order to match BlockDCTGrid band indexing.
    """
    quality = int(quality)
    if not 1 <= quality <= 100:
        raise InvalidInputError(f"quality {quality} outside 1..100")
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    table = (STANDARD_LUMA_TABLE * scale + 50) // 100
    return np.clip(table, 1, 255)[ZIGZAG]


@dataclass
class QuantTable:
    """Estimated quantization step and confidence per zig-zag band."""

    steps: np.ndarray  # (64,) int, >= 1
    confidence: np.ndarray  # (64,) float in [0, 1]


def estimate_qtable(grid: BlockDCTGrid, max_step=63, residual_tol=0.45):
    """Estimate the quantization table from level-shifted DCT coefficients.

    Per band, candidate steps q are scored by the mean distance of the
    informative coefficients (|D| > 0.5; near-zero ones fit any lattice) to
    their nearest multiple of q.  Every divisor of the true step also scores
    near zero, so the chosen step is the largest candidate whose residual
    stays within ``residual_tol``.  Confidence compares the winning residual
    against q/4, the expectation for unquantized data at that step.  Bands
    with near-zero coefficient mass keep step 1 with confidence 0.
    """
    if grid.n_blocks < 64:
        raise InvalidInputError(
            f"quantization estimation needs at least 64 blocks, got {grid.n_blocks}"
        )
    steps = np.ones(64, dtype=np.int64)
    confidence = np.zeros(64)
    candidates = np.arange(1, int(max_step) + 1, dtype=np.float64)
    min_mass = max(16, int(0.01 * grid.n_blocks))
    for j in range(64):
        band = grid.band(j)
        informative = band[np.abs(band) > 0.5]
        if informative.size < min_mass:
            continue
        ratios = informative[None, :] / candidates[:, None]
        residual = np.abs(
            informative[None, :] - candidates[:, None] * np.round(ratios)
        ).mean(axis=1)
        passing = np.nonzero(residual <= residual_tol)[0]
        if passing.size == 0:
            continue
        best = passing[-1]
        q = candidates[best]
        steps[j] = int(q)
        confidence[j] = float(np.clip(1.0 - residual[best] / (q / 4.0), 0.0, 1.0))
    return QuantTable(steps=steps, confidence=confidence)


def quantization_residual(grid: BlockDCTGrid, table: QuantTable, num_bands=16):
    """Blocking artifact measure: per-block absolute requantization residual.

    Sums |D - Q*round(D/Q)| over the first ``num_bands`` zig-zag AC bands
    that carry positive confidence.
    """
    bands = [j for j in range(1, num_bands + 1) if table.confidence[j] > 0]
    bam = np.zeros(grid.n_blocks)
    for j in bands:
        d = grid.band(j)
        q = float(table.steps[j])
        bam += np.abs(d - q * np.round(d / q))
    return bam.reshape(grid.blocks_high, grid.blocks_wide)


class QuantTableDetector(BaseDetector):
    """DCT-history detector: blocks inconsistent with the globally estimated
    quantization table score high."""

    def __init__(self, max_step=63, residual_tol=0.45, num_bands=16):
        self.max_step = max_step
        self.residual_tol = residual_tol
        self.num_bands = num_bands

    def _score_image(self, image):
        luma = self._luma(image)
        check_min_size(luma, 32, 32)
        grid = block_dct8(luma, level_shift=True)
        table = estimate_qtable(grid, self.max_step, self.residual_tol)
        bam = quantization_residual(grid, table, self.num_bands)
        heat = percentile_normalize(bam, 99)
        return upsample_nearest(heat, 8, luma.shape)


class ErrorLevelDetector(BaseDetector):
    """Error level analysis: residual against one more JPEG round-trip.

    Regions with fewer prior compressions keep more high-frequency content
    and respond more strongly to requantization.
    """

    def __init__(self, quality=90):
        self.quality = quality

    def _score_image(self, image):
        residual = np.abs(image - jpeg_roundtrip(image, self.quality))
        if residual.ndim == 3:
            residual = residual.max(axis=2)
        return percentile_normalize(residual, 95)


class BlockArtifactGridDetector(BaseDetector):
    """Blocking-grid mismatch detector.

    Second differences concentrate on JPEG block boundaries.  The global
    grid phase is the 8-offset class with maximal boundary energy; each 8x8
    block is then scored by how much energy sits off that grid versus on
    it.  Misaligned or missing local grids both push the score up.
    """

    def __init__(self):
        pass

    def _score_image(self, image):
        luma = self._luma(image)
        check_min_size(luma, 64, 64)
        h, w = luma.shape

        d_row = np.abs(2.0 * luma - np.roll(luma, 1, axis=0) - np.roll(luma, -1, axis=0))
        d_row[0, :] = 0.0
        d_row[-1, :] = 0.0
        d_col = np.abs(2.0 * luma - np.roll(luma, 1, axis=1) - np.roll(luma, -1, axis=1))
        d_col[:, 0] = 0.0
        d_col[:, -1] = 0.0

        phase_row = int(np.argmax([d_row[p::8, :].mean() for p in range(8)]))
        phase_col = int(np.argmax([d_col[:, p::8].mean() for p in range(8)]))

        bh, bw = h // 8, w // 8
        rows = d_row[: bh * 8, : bw * 8].reshape(bh, 8, bw, 8)
        cols = d_col[: bh * 8, : bw * 8].reshape(bh, 8, bw, 8)
        on_r = rows[:, phase_row, :, :].mean(axis=-1)
        off_r = rows[:, [p for p in range(8) if p != phase_row], :, :].mean(axis=(1, 3))
        on_c = cols[:, :, :, phase_col].mean(axis=1)
        off_c = cols[:, :, :, [p for p in range(8) if p != phase_col]].mean(axis=(1, 3))
        mismatch = (off_r - on_r) + (off_c - on_c)

        med = np.median(mismatch)
        scale = np.percentile(np.abs(mismatch - med), 99)
        if scale <= 1e-12:
            return np.zeros((h, w))
        z = np.clip((mismatch - med) / scale, -1.0, 1.0)
        span = z.max() - z.min()
        if span <= 1e-12:
            return np.zeros((h, w))
        z = (z - z.min()) / span
        return upsample_nearest(z, 8, (h, w))
