"""Noise-inconsistency detectors.

Three complementary cues: blockwise MAD noise levels on the diagonal
wavelet subband, blind noise estimation from the kurtosis concentration of
DCT bands, and the median filter residual.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..imaging.blockdct import block_dct8
from ..imaging.ops import gaussian_blur, median_filter, percentile_normalize, upsample_nearest
from ..imaging.wavelet import haar_hh
from ..validation import check_min_size
from .base import BaseDetector

# median(|N(0,1)|) = 0.6745: converts a median absolute value to a sigma.
_MAD_SCALE = 0.6745


def wavelet_noise_map(luma, block_size=8):
    """Blockwise noise sigma from the HH subband via the MAD estimator.

    Tiles the half-resolution diagonal subband into block_size^2 tiles and
    returns median(|coeff|)/0.6745 per tile, robust to sparse image detail.
    """
    hh = haar_hh(luma)
    bs = int(block_size)
    bh, bw = hh.shape[0] // bs, hh.shape[1] // bs
    if bh < 1 or bw < 1:
        raise InvalidInputError("image too small for the requested block size")
    tiles = np.abs(hh[: bh * bs, : bw * bs].reshape(bh, bs, bw, bs).transpose(0, 2, 1, 3))
    return np.median(tiles.reshape(bh, bw, bs * bs), axis=-1) / _MAD_SCALE


class WaveletNoiseDetector(BaseDetector):
    """Local noise-level deviations in the diagonal wavelet subband.

    Deviation from the global median noise level, in either direction, is
    the tampering cue: added noise and denoised splices both stand out.
    """

    def __init__(self, block_size=8):
        self.block_size = block_size

    def _score_image(self, image):
        luma = self._luma(image)
        side = 2 * 8 * int(self.block_size)
        check_min_size(luma, side, side)
        sigma = wavelet_noise_map(luma, self.block_size)
        deviation = np.abs(sigma - np.median(sigma))
        heat = percentile_normalize(deviation, 99)
        return upsample_nearest(heat, 2 * int(self.block_size), luma.shape)


@dataclass
class BandStats:
    """Sliding-window moment statistics of the 63 AC DCT bands.

    variances/kurtoses have shape (n_windows, 63); kurtosis is the
    non-excess m4/m2^2 convention (Gaussian = 3) and is NaN where a band
    is degenerate.  window_origin holds each window's top-left block
    coordinates on the 8x8 block grid.
    """

    variances: np.ndarray
    kurtoses: np.ndarray
    count: int
    window_origin: np.ndarray
    blocks_high: int
    blocks_wide: int
    window_blocks: int
    stride: int


def band_stats(luma, window_blocks=8, stride=4):
    """Per-window variance and kurtosis of every AC band.

    The image is transformed with a level-shifted 8x8 block DCT; windows of
    window_blocks^2 blocks slide with the given stride over the block grid.
    """
    grid = block_dct8(luma, level_shift=True)
    wb = int(window_blocks)
    stride = int(stride)
    if grid.blocks_high < wb or grid.blocks_wide < wb:
        raise InvalidInputError("image too small to fill one analysis window")
    cube = grid.block_grid()[:, :, 1:]  # drop DC
    origins = [
        (si, sj)
        for si in range(0, grid.blocks_high - wb + 1, stride)
        for sj in range(0, grid.blocks_wide - wb + 1, stride)
    ]
    variances = np.empty((len(origins), 63))
    kurtoses = np.empty((len(origins), 63))
    for n, (si, sj) in enumerate(origins):
        window = cube[si : si + wb, sj : sj + wb].reshape(-1, 63)
        centered = window - window.mean(axis=0)
        m2 = (centered**2).mean(axis=0)
        m4 = (centered**4).mean(axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            kurt = np.where(m2 > 1e-12, m4 / np.maximum(m2, 1e-300) ** 2, np.nan)
        variances[n] = m2
        kurtoses[n] = kurt
    return BandStats(
        variances=variances,
        kurtoses=kurtoses,
        count=wb * wb,
        window_origin=np.array(origins, dtype=np.int64),
        blocks_high=grid.blocks_high,
        blocks_wide=grid.blocks_wide,
        window_blocks=wb,
        stride=stride,
    )


def fit_noise_level(variances, kurtoses, count):
    """Closed-form noise variance from the kurtosis concentration law.

    Under kappa_k = kappa * (s_k^2 / (s_k^2 + n^2))^2 with observed band
    variance v_k = s_k^2 + n^2, sqrt(kappa_k) is linear in 1/v_k:
    y = a - b*x with a = sqrt(kappa) and b = sqrt(kappa)*n^2, hence the
    noise variance estimate is b/a.  Returns (a, b, sigma2); sigma2 is
    clamped at 0 and a is floored at 1e-6.  Windows with fewer than 8
    usable bands are unscored (sigma2 = 0).
    """
    variances = np.asarray(variances, dtype=np.float64)
    kurtoses = np.asarray(kurtoses, dtype=np.float64)
    usable = (variances > 1e-6) & np.isfinite(kurtoses) & (count >= 16)
    if usable.sum() < 8:
        return 0.0, 0.0, 0.0
    y = np.sqrt(np.maximum(kurtoses[usable], 0.0))
    x = 1.0 / variances[usable]
    design = np.stack([np.ones_like(x), -x], axis=1)
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    a = max(float(a), 1e-6)
    return a, float(b), max(float(b) / a, 0.0)


def kurtosis_noise_map(luma, window_blocks=8, stride=4):
    """Blockwise noise-variance map from sliding-window kurtosis fits.

    Each window's estimate is assigned to its central stride-cell on the
    block grid; border cells take the nearest window, so every block gets
    exactly one estimate and no averaging blurs the field.
    """
    stats = band_stats(luma, window_blocks, stride)
    estimates = np.array(
        [
            fit_noise_level(stats.variances[n], stats.kurtoses[n], stats.count)[2]
            for n in range(stats.variances.shape[0])
        ]
    )
    wb, stride = stats.window_blocks, stats.stride
    starts_i = sorted({int(si) for si, _ in stats.window_origin})
    starts_j = sorted({int(sj) for _, sj in stats.window_origin})
    index = {
        (int(si), int(sj)): n for n, (si, sj) in enumerate(stats.window_origin)
    }

    def nearest_start(block, starts):
        centers = np.asarray(starts) + wb / 2.0
        return starts[int(np.argmin(np.abs(centers - (block + 0.5))))]

    out = np.empty((stats.blocks_high, stats.blocks_wide))
    row_start = [nearest_start(bi, starts_i) for bi in range(stats.blocks_high)]
    col_start = [nearest_start(bj, starts_j) for bj in range(stats.blocks_wide)]
    for bi in range(stats.blocks_high):
        for bj in range(stats.blocks_wide):
            out[bi, bj] = estimates[index[(row_start[bi], col_start[bj])]]
    return out


class KurtosisNoiseDetector(BaseDetector):
    """Blind local noise estimation via projection kurtosis concentration."""

    def __init__(self, window_blocks=8, stride=4):
        self.window_blocks = window_blocks
        self.stride = stride

    def _score_image(self, image):
        luma = self._luma(image)
        sigma2 = kurtosis_noise_map(luma, self.window_blocks, self.stride)
        heat = percentile_normalize(sigma2, 99)
        return upsample_nearest(heat, 8, luma.shape)


class MedianResidualDetector(BaseDetector):
    """Median filter residual energy deviations.

    Smoothed regions depress the residual, noisy splices raise it; the
    score is the absolute deviation of the blurred residual energy from
    its global median.
    """

    def __init__(self, kernel_size=3, smoothing_sigma=4.0):
        self.kernel_size = kernel_size
        self.smoothing_sigma = smoothing_sigma

    def _score_image(self, image):
        luma = self._luma(image)
        check_min_size(luma, 3, 3)
        residual = np.abs(luma - median_filter(luma, self.kernel_size))
        energy = gaussian_blur(residual, self.smoothing_sigma)
        deviation = np.abs(energy - np.median(energy))
        return percentile_normalize(deviation, 99)
