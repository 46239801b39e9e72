import numpy as np
import pytest

from tamperscope.errors import InvalidInputError, UndefinedScoreError
from tamperscope.scoring import (
    ScoreRow,
    aggregate,
    auc,
    gwl1,
    no_score_weights,
    pristine_mask,
)

from oracles import gwl1_direct, morph_map, rank_auc


def square_mask(h, w, y0, x0, side):
    mask = np.zeros((h, w), dtype=np.uint8)
    mask[y0 : y0 + side, x0 : x0 + side] = 255
    return mask


# ---------------------------------------------------------------------------
# no-score weights


def test_weights_empty_mask():
    mask = np.zeros((32, 32), dtype=np.uint8)
    w = no_score_weights(mask, 5)
    assert w.manipulated.sum() == 0
    assert w.non_manipulated.sum() == 32 * 32
    assert w.weights.all()


def test_weights_centered_square_kernel5():
    mask = square_mask(64, 64, 27, 27, 10)
    w = no_score_weights(mask, 5)
    assert w.manipulated.sum() == 36  # 6x6 core
    no_score = ~w.weights
    assert no_score.sum() == 14 * 14 - 6 * 6
    assert w.evaluated_count == 64 * 64 - (14 * 14 - 6 * 6)
    # brute-force cross-check
    dil = morph_map(mask, "dilate", 5) > 0
    ero = morph_map(mask, "erode", 5) > 0
    assert np.array_equal(w.manipulated, ero)
    assert np.array_equal(w.non_manipulated, ~dil)


def test_weights_full_mask_default_kernel():
    mask = np.full((40, 40), 255, dtype=np.uint8)
    w = no_score_weights(mask)  # kernel 15
    core = np.zeros((40, 40), dtype=bool)
    core[7:-7, 7:-7] = True
    assert np.array_equal(w.manipulated, core)
    assert w.non_manipulated.sum() == 0


# ---------------------------------------------------------------------------
# gwl1


def test_gwl1_perfect_prediction():
    mask = square_mask(32, 32, 8, 8, 10)
    w = no_score_weights(mask, 5)
    assert gwl1(mask, mask.astype(float) / 255.0, w) == 0.0


def test_gwl1_inverted_prediction():
    mask = square_mask(32, 32, 8, 8, 10)
    w = no_score_weights(mask, 5)
    pred = (255 - mask).astype(float) / 255.0
    assert gwl1(mask, pred, w) == pytest.approx(1.0)


def test_gwl1_toy_half_mask_constant_pred():
    # 4x4, left half manipulated, constant 128/255 prediction, kernel 1:
    # every pixel scored, |m - 128| is 128 on zeros and 127 on 255s,
    # so the mean is exactly (128 + 127) / (2 * 255) = 0.5.
    mask = np.zeros((4, 4), dtype=np.uint8)
    mask[:, :2] = 255
    w = no_score_weights(mask, 1)
    pred = np.full((4, 4), 128.0 / 255.0)
    value = gwl1(mask, pred, w)
    assert value == pytest.approx(0.5, abs=1e-12)
    assert value == pytest.approx(gwl1_direct(mask, np.full((4, 4), 128.0), 1))


def test_gwl1_ignores_no_score_band(rng):
    mask = square_mask(48, 48, 16, 16, 12)
    w = no_score_weights(mask, 5)
    pred = (mask.astype(float) / 255.0).copy()
    base = gwl1(mask, pred, w)
    noisy = pred.copy()
    noisy[~w.weights] = rng.uniform(size=(~w.weights).sum())
    assert gwl1(mask, noisy, w) == base


def test_gwl1_undefined_when_everything_excluded():
    # mask whose dilation covers the whole frame: ER = 0
    mask = np.full((8, 8), 255, dtype=np.uint8)
    mask[0, 0] = 0
    w = no_score_weights(mask, 15)
    assert w.evaluated_count == 0
    with pytest.raises(UndefinedScoreError):
        gwl1(mask, np.zeros((8, 8)), w)


# ---------------------------------------------------------------------------
# auc


def test_auc_perfect_prediction():
    mask = square_mask(32, 32, 8, 8, 12)
    w = no_score_weights(mask, 5)
    assert auc(mask, mask.astype(float) / 255.0, w) == pytest.approx(1.0)


def test_auc_constant_prediction_is_half():
    mask = square_mask(32, 32, 8, 8, 12)
    w = no_score_weights(mask, 5)
    assert auc(mask, np.full((32, 32), 0.3), w) == pytest.approx(0.5)


def test_auc_inverted_prediction_is_zero():
    mask = square_mask(32, 32, 8, 8, 12)
    w = no_score_weights(mask, 5)
    pred = (255 - mask).astype(float) / 255.0
    assert auc(mask, pred, w) == pytest.approx(0.0)


def test_auc_undefined_on_empty_regions():
    mask = np.zeros((32, 32), dtype=np.uint8)
    w = no_score_weights(mask, 5)
    with pytest.raises(UndefinedScoreError):
        auc(mask, np.zeros((32, 32)), w)


def test_auc_monotone_transform_invariance(rng):
    # any strictly monotone transform of the scores leaves the AUC alone;
    # the transform here remaps the occupied quantized levels to a sparser
    # strictly increasing set so quantization cannot merge levels
    mask = square_mask(24, 24, 6, 6, 9)
    w = no_score_weights(mask, 3)
    levels = np.sort(rng.choice(256, size=100, replace=False))
    pred = levels[rng.integers(0, 100, size=(24, 24))] / 255.0
    spread = np.sort(rng.choice(256, size=100, replace=False))
    remap = dict(zip(levels, spread))
    transformed = np.vectorize(lambda v: remap[int(round(v * 255))])(pred) / 255.0
    assert auc(mask, pred, w) == pytest.approx(auc(mask, transformed, w), abs=1e-12)


def test_metrics_match_bruteforce_oracles(rng):
    # library vs set-enumeration GWL1 and rank-statistic AUC
    for _ in range(10):
        mask = (rng.uniform(size=(16, 16)) > 0.6).astype(np.uint8) * 255
        pred = rng.uniform(size=(16, 16))
        w = no_score_weights(mask, 3)
        quantized = np.round(pred * 255)
        expected_gwl1 = gwl1_direct(mask, quantized, 3)
        if expected_gwl1 is not None and w.evaluated_count > 0:
            assert gwl1(mask, pred, w) == pytest.approx(expected_gwl1, abs=1e-9)
        expected_auc = rank_auc(mask, quantized, 3)
        if expected_auc is not None:
            assert auc(mask, pred, w) == pytest.approx(expected_auc, abs=1e-9)


# ---------------------------------------------------------------------------
# pristine protocol


def test_pristine_mask_layout():
    mask = pristine_mask(512, 512)
    assert mask.shape == (512, 512)
    assert mask.sum() == 100 * 255
    assert np.all(mask[16:26, 16:26] == 255)
    mask[16:26, 16:26] = 0
    assert mask.sum() == 0


def test_pristine_mask_deterministic():
    assert np.array_equal(pristine_mask(128, 96), pristine_mask(128, 96))


def test_pristine_mask_too_small():
    with pytest.raises(InvalidInputError):
        pristine_mask(32, 32)


def test_pristine_regime_gwl1_vs_auc():
    # On clean data the all-zero prediction keeps GWL1 at |MR|/ER while the
    # AUC is driven by the eroded (possibly empty) manipulated region.
    zero_pred = np.zeros((128, 128))
    mask = pristine_mask(128, 128)

    w5 = no_score_weights(mask, 5)
    assert w5.manipulated.sum() == 36
    expected = w5.manipulated.sum() / w5.evaluated_count
    assert gwl1(mask, zero_pred, w5) == pytest.approx(expected)
    assert expected < 0.01

    w15 = no_score_weights(mask, 15)
    assert w15.manipulated.sum() == 0  # 10x10 erodes to nothing
    assert gwl1(mask, zero_pred, w15) == pytest.approx(0.0)
    with pytest.raises(UndefinedScoreError):
        auc(mask, zero_pred, w15)


# ---------------------------------------------------------------------------
# aggregation


def test_aggregate_mean_and_population_std():
    rows = [
        ScoreRow("a", "ela", 0.2, 0.6),
        ScoreRow("b", "ela", 0.4, 0.8),
    ]
    (agg,) = aggregate(rows)
    assert agg.gwl1_mean == pytest.approx(0.30)
    assert agg.gwl1_std == pytest.approx(0.10)
    assert agg.auc_mean == pytest.approx(0.70)


def test_aggregate_single_row_zero_std():
    (agg,) = aggregate([ScoreRow("a", "blk", 0.5, 0.5)])
    assert agg.gwl1_std == 0.0 and agg.auc_std == 0.0


def test_aggregate_identical_rows():
    rows = [ScoreRow(str(i), "dct", 0.25, 0.75) for i in range(5)]
    (agg,) = aggregate(rows)
    assert agg.gwl1_mean == 0.25 and agg.gwl1_std == 0.0
    assert agg.auc_mean == 0.75 and agg.auc_std == 0.0


def test_aggregate_empty_errors():
    with pytest.raises(InvalidInputError):
        aggregate([])


def test_aggregate_order_independent(rng):
    rows = [ScoreRow(str(i), "noi1", float(g), float(a))
            for i, (g, a) in enumerate(rng.uniform(size=(20, 2)))]
    fwd = aggregate(rows)
    rev = aggregate(rows[::-1])
    assert fwd[0].gwl1_mean == pytest.approx(rev[0].gwl1_mean, abs=1e-15)
    assert fwd[0].auc_std == pytest.approx(rev[0].auc_std, abs=1e-15)
