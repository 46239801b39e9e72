"""Mask scoring: weighted L1 and ROC-AUC with no-score boundary regions.

A band of Dilation(m) minus Erosion(m) around every ground-truth region is
excluded from scoring so mask border complexity does not dominate.  The
evaluated pixels split into MR = Erosion(m) (scored as manipulated) and
NotMR = the complement of Dilation(m) (scored as non-manipulated).
Predictions are quantized to 0..255 before either metric is computed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UndefinedScoreError
from .imaging.morphology import dilate, erode
from .validation import check_heatmap, check_mask, check_same_shape

DEFAULT_KERNEL = 15


@dataclass
class ScoreWeights:
    """Per-pixel scoring weights and the derived evaluated regions."""

    weights: np.ndarray  # bool: True where the pixel is scored
    manipulated: np.ndarray  # bool: MR, scored as manipulated
    non_manipulated: np.ndarray  # bool: NotMR, scored as non-manipulated

    @property
    def evaluated_count(self):
        return int(self.manipulated.sum() + self.non_manipulated.sum())


def no_score_weights(mask, kernel=DEFAULT_KERNEL):
    """Build scoring weights for a ground-truth mask.

    kernel is the side of the square structuring element used for both the
    dilation and the erosion.
    """
    mask = check_mask(mask)
    dilated = dilate(mask, kernel) > 0
    eroded = erode(mask, kernel) > 0
    weights = ~(dilated & ~eroded)
    return ScoreWeights(
        weights=weights,
        manipulated=eroded,
        non_manipulated=~dilated,
    )


def _quantize(pred):
    return np.round(check_heatmap(pred) * 255.0)


def gwl1(mask, pred, weights):
    """Grayscale weighted L1 distance in [0, 1] (lower is better)."""
    mask = check_mask(mask)
    check_same_shape(mask, np.asarray(pred), "mask", "prediction")
    er = weights.evaluated_count
    if er == 0:
        raise UndefinedScoreError("no evaluated pixels (ER = 0)")
    diff = np.abs(mask.astype(np.float64) - _quantize(pred)) / 255.0
    return float(diff[weights.weights].sum() / er)


def auc(mask, pred, weights):
    """Area under the pixel ROC curve over the evaluated regions.

    Thresholds sweep the distinct quantized prediction values in
    descending order, with sentinels above the maximum and at 0; a pixel
    is positive when its value is >= the threshold.  The curve is
    accumulated trapezoidally, which handles ties exactly like the
    rank-statistic (Mann-Whitney) formulation.
    """
    mask = check_mask(mask)
    check_same_shape(mask, np.asarray(pred), "mask", "prediction")
    n_pos = int(weights.manipulated.sum())
    n_neg = int(weights.non_manipulated.sum())
    if n_pos == 0 or n_neg == 0:
        raise UndefinedScoreError("MR or NotMR is empty; AUC undefined")
    q = _quantize(pred)
    pos = q[weights.manipulated]
    neg = q[weights.non_manipulated]
    values = np.unique(np.concatenate([pos, neg]))[::-1]
    thresholds = np.concatenate([[values[0] + 1.0], values])
    if thresholds[-1] != 0.0:
        thresholds = np.concatenate([thresholds, [0.0]])
    area = 0.0
    tpr_prev = fpr_prev = 0.0
    for theta in thresholds:
        tpr = (pos >= theta).sum() / n_pos
        fpr = (neg >= theta).sum() / n_neg
        area += 0.5 * (tpr + tpr_prev) * (fpr - fpr_prev)
        tpr_prev, fpr_prev = tpr, fpr
    return float(area)


def pristine_mask(width, height, region_side=10, offset=16):
    """Fictional ground truth for non-manipulated images.

    Marks a small region_side x region_side square at a fixed offset so
    clean images remain rankable under the mask metrics.  Placement is
    deterministic across runs.
    """
    if width < 64 or height < 64:
        raise InvalidInputError("pristine protocol needs an image of at least 64x64")
    if offset + region_side > min(width, height):
        raise InvalidInputError("pristine region does not fit inside the frame")
    mask = np.zeros((height, width), dtype=np.uint8)
    mask[offset : offset + region_side, offset : offset + region_side] = 255
    return mask


@dataclass
class ScoreRow:
    image_id: str
    detector: str
    gwl1: float
    auc: float


@dataclass
class DetectorAggregate:
    detector: str
    gwl1_mean: float
    gwl1_std: float
    auc_mean: float
    auc_std: float


def aggregate(rows):
    """Mean and population standard deviation per detector.

    Returns one DetectorAggregate per detector, sorted by detector name.
    """
    if not rows:
        raise InvalidInputError("cannot aggregate an empty score list")
    by_detector = {}
    for row in rows:
        by_detector.setdefault(row.detector, []).append(row)
    out = []
    for name in sorted(by_detector):
        g = np.array([r.gwl1 for r in by_detector[name]])
        a = np.array([r.auc for r in by_detector[name]])
        out.append(
            DetectorAggregate(
                detector=name,
                gwl1_mean=float(g.mean()),
                gwl1_std=float(g.std()),
                auc_mean=float(a.mean()),
                auc_std=float(a.std()),
            )
        )
    return out
