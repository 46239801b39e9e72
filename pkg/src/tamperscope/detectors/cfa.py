"""CFA-interpolation detectors.

Both detectors look for places where the position-dependent statistics of
demosaiced content break down.  The pattern detector works on 16x16 blocks
with reinterpolation error and residual-variance features; the posterior
detector models the 2x2-block log variance ratio with a two-component
Gaussian mixture fitted by EM.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.special import logsumexp
from scipy.stats import rankdata

from ..errors import InvalidInputError
from ..imaging.bayer import (
    BAYER_PATTERNS,
    bilinear_demosaic,
    green_prediction_error,
    mosaic_from_rgb,
)
from ..imaging.ops import upsample_nearest
from ..validation import check_color_image, check_min_size
from .base import BaseDetector

_VAR_FLOOR = 1e-8


def reinterpolation_error(img, pattern):
    """Per-pixel squared error of mosaic + bilinear redemosaic under a pattern."""
    re = bilinear_demosaic(mosaic_from_rgb(img, pattern), pattern)
    return ((img - re) ** 2).sum(axis=-1)


def estimate_bayer_pattern(img):
    """Most plausible source pattern: argmin of total reinterpolation error.

    Ties resolve by the fixed priority RGGB > GRBG > GBRG > BGGR (the
    iteration order of BAYER_PATTERNS).
    """
    img = check_color_image(img)
    errors = {}
    best, best_err = None, np.inf
    for name in BAYER_PATTERNS:
        total = float(reinterpolation_error(img, name).sum())
        errors[name] = total
        if total < best_err:
            best, best_err = name, total
    return best, errors


def _block_reduce_sum(values, block):
    h = values.shape[0] // block * block
    w = values.shape[1] // block * block
    return values[:h, :w].reshape(h // block, block, w // block, block).sum(axis=(1, 3))


def _rank01(values):
    flat = rankdata(values.ravel(), method="average")
    if values.size <= 1:
        return np.zeros_like(values, dtype=np.float64)
    return ((flat - 1.0) / (values.size - 1.0)).reshape(values.shape)


@dataclass
class GmmFit:
    """Two-component 1-D Gaussian mixture; component 0 is the high-mean
    ("CFA present") one."""

    means: np.ndarray
    variances: np.ndarray
    weights: np.ndarray
    log_likelihoods: list = field(default_factory=list)

    @property
    def degenerate(self):
        pooled = np.sqrt(self.weights @ self.variances)
        return abs(self.means[0] - self.means[1]) < 0.1 * pooled

    def posterior_low(self, x):
        """Posterior probability of the low-mean ("CFA absent") component."""
        lp = self._log_joint(np.asarray(x, dtype=np.float64))
        return np.exp(lp[1] - logsumexp(lp, axis=0))

    def _log_joint(self, x):
        return (
            -0.5 * np.log(2.0 * np.pi * self.variances)[:, None]
            - (x[None, :] - self.means[:, None]) ** 2 / (2.0 * self.variances[:, None])
            + np.log(self.weights)[:, None]
        )


def fit_two_component_gmm(values, max_iter=200, tol=1e-6):
    """EM fit of a two-component 1-D GMM.

    Initialization is quantile-based (means at the 75th/25th percentiles,
    shared variance, equal weights) so the fit is deterministic.  The
    log-likelihood trace is checked to be non-decreasing on every fit.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    fit = GmmFit(
        means=np.array([np.percentile(x, 75), np.percentile(x, 25)]),
        variances=np.maximum(np.array([x.var(), x.var()]), _VAR_FLOOR),
        weights=np.array([0.5, 0.5]),
    )
    previous = -np.inf
    for _ in range(max_iter):
        log_joint = fit._log_joint(x)
        log_norm = logsumexp(log_joint, axis=0)
        ll = float(log_norm.sum())
        if fit.log_likelihoods and ll < fit.log_likelihoods[-1] - 1e-9:
            raise AssertionError("EM log-likelihood decreased")
        fit.log_likelihoods.append(ll)
        resp = np.exp(log_joint - log_norm)
        nk = np.maximum(resp.sum(axis=1), 1e-12)
        fit.means = (resp @ x) / nk
        fit.variances = np.maximum(
            (resp * (x[None, :] - fit.means[:, None]) ** 2).sum(axis=1) / nk, _VAR_FLOOR
        )
        fit.weights = nk / x.size
        if abs(ll - previous) < tol:
            break
        previous = ll
    if fit.means[0] < fit.means[1]:
        fit.means = fit.means[::-1].copy()
        fit.variances = fit.variances[::-1].copy()
        fit.weights = fit.weights[::-1].copy()
    return fit


def cfa2_feature(img, pattern, neighborhood_blocks=8):
    """Per-2x2-block log ratio of residual variances: acquired vs interpolated.

    The green prediction error is computed from acquired positions only;
    its local variance (7x7 Gaussian window, sigma 1.5) is estimated
    separately for the two position classes so they never mix.  L is the
    log ratio of the geometric means of those variances over each block's
    8x8-block neighborhood.  Demosaiced content has near-zero interpolated
    variance, so pristine blocks sit at L > 0 while CFA-free content sits
    near 0.
    """
    img = check_color_image(img)
    error, acquired = green_prediction_error(img, pattern)
    a_mask = acquired.astype(np.float64)
    i_mask = 1.0 - a_mask

    def masked_local_variance(mask):
        # 7x7 Gaussian window: radius 3 at sigma 1.5 -> truncate 2.0
        weight = ndimage.gaussian_filter(mask, 1.5, mode="nearest", truncate=2.0)
        mean = ndimage.gaussian_filter(error * mask, 1.5, mode="nearest", truncate=2.0)
        mean /= np.maximum(weight, 1e-12)
        second = ndimage.gaussian_filter(error**2 * mask, 1.5, mode="nearest", truncate=2.0)
        second /= np.maximum(weight, 1e-12)
        return np.maximum(second - mean**2, _VAR_FLOOR)

    log_var = np.where(
        acquired,
        np.log(masked_local_variance(a_mask)),
        np.log(masked_local_variance(i_mask)),
    )

    sum_a = _block_reduce_sum(log_var * a_mask, 2)
    cnt_a = _block_reduce_sum(a_mask, 2)
    sum_i = _block_reduce_sum(log_var * i_mask, 2)
    cnt_i = _block_reduce_sum(i_mask, 2)

    size = neighborhood_blocks
    mean_a = ndimage.uniform_filter(sum_a, size, mode="nearest") / np.maximum(
        ndimage.uniform_filter(cnt_a, size, mode="nearest"), 1e-12
    )
    mean_i = ndimage.uniform_filter(sum_i, size, mode="nearest") / np.maximum(
        ndimage.uniform_filter(cnt_i, size, mode="nearest"), 1e-12
    )
    return mean_a - mean_i


class CfaPatternDetector(BaseDetector):
    """Pattern-consistency detector (block features over the estimated mosaic).

    F1 compares each block's reinterpolation error under the winning
    pattern against the average over all four patterns: near 0 where the
    pattern fits, near 1 where no pattern wins.  F2 is the ratio of
    residual variance at interpolated versus sensed green positions, which
    approaches 1 when interpolation structure is gone.  Both features are
    rank-normalized and averaged.
    """

    requires_color = True

    def __init__(self, block_size=16):
        self.block_size = block_size

    def _score_image(self, image):
        bs = int(self.block_size)
        check_min_size(image, 4 * bs, 4 * bs)
        h, w = image.shape[:2]
        best, _ = estimate_bayer_pattern(image)

        block_err = {}
        for name in BAYER_PATTERNS:
            per_px = reinterpolation_error(image, name)
            block_err[name] = _block_reduce_sum(per_px, bs)
        err_best = block_err[best]
        err_mean = np.mean([block_err[name] for name in BAYER_PATTERNS], axis=0)
        f1 = np.where(err_mean > 1e-12, err_best / np.maximum(err_mean, 1e-300), 1.0)

        error, acquired = green_prediction_error(image, best)
        f2 = self._variance_ratio(error, acquired, bs)

        score = 0.5 * _rank01(f1) + 0.5 * _rank01(1.0 - np.abs(f2 - 1.0))
        return upsample_nearest(score, bs, (h, w))

    @staticmethod
    def _variance_ratio(error, acquired, bs):
        a_mask = acquired.astype(np.float64)
        i_mask = 1.0 - a_mask

        def block_variance(mask):
            n = np.maximum(_block_reduce_sum(mask, bs), 1.0)
            s1 = _block_reduce_sum(error * mask, bs)
            s2 = _block_reduce_sum(error**2 * mask, bs)
            mu = s1 / n
            return np.maximum(s2 / n - mu**2, _VAR_FLOOR)

        return block_variance(i_mask) / block_variance(a_mask)


class CfaPosteriorDetector(BaseDetector):
    """Fine-grained CFA detector: GMM posterior of the "CFA absent" class
    per 2x2 block."""

    requires_color = True

    def __init__(self, neighborhood_blocks=8, max_iter=200, tol=1e-6):
        self.neighborhood_blocks = neighborhood_blocks
        self.max_iter = max_iter
        self.tol = tol

    def _score_image(self, image):
        h, w = image.shape[:2]
        if (h // 2) * (w // 2) < 64:
            raise InvalidInputError("image too small: needs at least 64 2x2 blocks")
        best, _ = estimate_bayer_pattern(image)
        feature = cfa2_feature(image, best, self.neighborhood_blocks)
        fit = fit_two_component_gmm(feature, self.max_iter, self.tol)
        if fit.degenerate:
            return np.full((h, w), 0.5)
        posterior = fit.posterior_low(feature.ravel()).reshape(feature.shape)
        return upsample_nearest(posterior, 2, (h, w))
