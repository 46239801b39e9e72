"""Anomaly-enhancement loss: SMAPE distance, composite objective, triplets.

The composite loss rewards reconstructions that stay faithful to the
anchor in pixel space, close to same-class patches in an embedding space,
and far from opposite-class patches:

    L(a, a^, p, n) = w0*D(a, a^) + w1*D(f(a^), f(p)) - w2*D(f(a^), f(n))

with D the symmetric mean absolute percentage error, which bounds every
term to [0, 1].  A deterministic statistics embedding stands in for a
trained feature extractor so the loss math is testable; any callable with
the same signature can be swapped in.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NoTripletsError
from .imaging.wavelet import haar_decompose
from .validation import check_image, check_mask, check_same_shape

SMAPE_EPS = 1e-8

MANIPULATED = "manipulated"
NON_MANIPULATED = "non-manipulated"


def smape(x, y):
    """Symmetric mean absolute percentage error in [0, 1].

    D(x, y) = mean(|x_i - y_i| / (|x_i| + |y_i| + eps)).
    """
    xa = np.asarray(x, dtype=np.float64).ravel()
    ya = np.asarray(y, dtype=np.float64).ravel()
    if xa.shape != ya.shape:
        raise InvalidInputError(f"length mismatch: {xa.size} vs {ya.size}")
    return float(np.mean(np.abs(xa - ya) / (np.abs(xa) + np.abs(ya) + SMAPE_EPS)))


@dataclass
class Patch:
    """Square pixel block with its manipulation class label."""

    pixels: np.ndarray
    label: str
    x: int = 0
    y: int = 0

    def __post_init__(self):
        if self.label not in (MANIPULATED, NON_MANIPULATED):
            raise InvalidInputError(f"unknown patch label {self.label!r}")


@dataclass
class LossWeights:
    w0: float
    w1: float
    w2: float

    def __post_init__(self):
        if self.w0 < 0 or self.w1 < 0 or self.w2 < 0:
            raise InvalidInputError("loss weights must be non-negative")
        if self.w0 == self.w1 == self.w2 == 0:
            raise InvalidInputError("loss weights must not all be zero")


def reference_features(patch):
    """Deterministic patch embedding: moments plus Haar subband energies.

    Per channel: mean and variance of the samples, then the mean energies
    of the 10 subbands of a 3-level Haar decomposition (LH/HL/HH at each
    level plus the final LL) computed on the mean-removed patch, so a
    constant patch embeds to [mean, 0, 0, ..., 0].
    """
    pixels = np.asarray(patch.pixels if isinstance(patch, Patch) else patch, dtype=np.float64)
    pixels = check_image(pixels, "patch")
    planes = [pixels] if pixels.ndim == 2 else [pixels[..., c] for c in range(3)]
    feats = []
    for plane in planes:
        mean = plane.mean()
        feats.append(mean)
        feats.append(plane.var())
        level = plane - mean
        energies = []
        for _ in range(3):
            level, lh, hl, hh = haar_decompose(level)
            energies.extend(((lh**2).mean(), (hl**2).mean(), (hh**2).mean()))
        energies.append((level**2).mean())
        feats.extend(energies)
    return np.array(feats)


def enhancement_loss(anchor, enhanced, positive, negative, weights, feature_fn=reference_features):
    """Composite anomaly-enhancement objective for one triplet.

    ``anchor``/``positive``/``negative`` are labeled patches;
    ``enhanced`` is the reconstructed anchor (Patch or bare pixels) and is
    compared to the anchor in pixel space, to the others in feature space.
    """
    if isinstance(weights, (tuple, list)):
        weights = LossWeights(*weights)
    if positive.label != anchor.label:
        raise InvalidInputError("positive patch must share the anchor's class")
    if negative.label == anchor.label:
        raise InvalidInputError("negative patch must be of the opposite class")
    enhanced_pixels = enhanced.pixels if isinstance(enhanced, Patch) else np.asarray(enhanced)
    check_same_shape(anchor.pixels, enhanced_pixels, "anchor", "enhanced")
    f_enh = feature_fn(enhanced_pixels)
    pixel_term = smape(anchor.pixels, enhanced_pixels)
    cohesion_term = smape(f_enh, feature_fn(positive.pixels))
    contrast_term = smape(f_enh, feature_fn(negative.pixels))
    return weights.w0 * pixel_term + weights.w1 * cohesion_term - weights.w2 * contrast_term


@dataclass
class TripletBatch:
    anchors: list
    positives: list
    negatives: list

    def __len__(self):
        return len(self.anchors)

    def __iter__(self):
        return iter(zip(self.anchors, self.positives, self.negatives))


def extract_patches(image, mask, patch_side=64):
    """Tile the image into labeled patches.

    A patch is manipulated when at least half of its pixels are, pristine
    when none are, and discarded otherwise (mixed patches would muddy the
    class semantics).
    """
    image = check_image(image)
    mask = check_mask(mask)
    check_same_shape(image, mask, "image", "mask")
    side = int(patch_side)
    patches = []
    for y in range(0, image.shape[0] - side + 1, side):
        for x in range(0, image.shape[1] - side + 1, side):
            coverage = (mask[y : y + side, x : x + side] > 0).mean()
            if coverage >= 0.5:
                label = MANIPULATED
            elif coverage == 0.0:
                label = NON_MANIPULATED
            else:
                continue
            patches.append(Patch(pixels=image[y : y + side, x : x + side], label=label, x=x, y=y))
    return patches


def mine_triplets(image, mask, patch_side=64, count=32, seed=0):
    """Sample anchor/positive/negative patch triplets.

    Anchors alternate classes across the batch (manipulated first);
    positives are drawn uniformly from the anchor's class, negatives from
    the opposite one.  Raises NoTripletsError when either class is
    unpopulated, which covers fully pristine images.
    """
    patches = extract_patches(image, mask, patch_side)
    pools = {
        MANIPULATED: [p for p in patches if p.label == MANIPULATED],
        NON_MANIPULATED: [p for p in patches if p.label == NON_MANIPULATED],
    }
    for label, pool in pools.items():
        if not pool:
            raise NoTripletsError(f"no {label} patches under the labeling rule")
    rng = np.random.default_rng(seed)
    anchors, positives, negatives = [], [], []
    for i in range(int(count)):
        label = MANIPULATED if i % 2 == 0 else NON_MANIPULATED
        other = NON_MANIPULATED if label == MANIPULATED else MANIPULATED
        anchors.append(pools[label][rng.integers(len(pools[label]))])
        positives.append(pools[label][rng.integers(len(pools[label]))])
        negatives.append(pools[other][rng.integers(len(pools[other]))])
    return TripletBatch(anchors=anchors, positives=positives, negatives=negatives)
