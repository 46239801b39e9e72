"""Detector registry keyed by the community acronyms used on the CLI."""

from .base import BaseDetector
from .cfa import (
    CfaPatternDetector,
    CfaPosteriorDetector,
    cfa2_feature,
    estimate_bayer_pattern,
    fit_two_component_gmm,
    GmmFit,
)
from .jpeg import (
    BlockArtifactGridDetector,
    ErrorLevelDetector,
    QuantTable,
    QuantTableDetector,
    estimate_qtable,
    quant_table_for_quality,
    quantization_residual,
    STANDARD_LUMA_TABLE,
)
from .noise import (
    BandStats,
    KurtosisNoiseDetector,
    MedianResidualDetector,
    WaveletNoiseDetector,
    band_stats,
    fit_noise_level,
    kurtosis_noise_map,
    wavelet_noise_map,
)

DETECTORS = {
    "blk": BlockArtifactGridDetector,
    "dct": QuantTableDetector,
    "ela": ErrorLevelDetector,
    "cfa1": CfaPatternDetector,
    "cfa2": CfaPosteriorDetector,
    "noi1": WaveletNoiseDetector,
    "noi2": KurtosisNoiseDetector,
    "noi4": MedianResidualDetector,
}


def make_detector(name, **params):
    """Instantiate a detector by its registry name."""
    try:
        cls = DETECTORS[name]
    except KeyError:
        raise KeyError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None
    return cls(**params)


__all__ = [
    "BaseDetector",
    "DETECTORS",
    "make_detector",
    "BlockArtifactGridDetector",
    "QuantTableDetector",
    "ErrorLevelDetector",
    "CfaPatternDetector",
    "CfaPosteriorDetector",
    "WaveletNoiseDetector",
    "KurtosisNoiseDetector",
    "MedianResidualDetector",
    "QuantTable",
    "BandStats",
    "GmmFit",
    "estimate_qtable",
    "quantization_residual",
    "quant_table_for_quality",
    "STANDARD_LUMA_TABLE",
    "estimate_bayer_pattern",
    "cfa2_feature",
    "fit_two_component_gmm",
    "band_stats",
    "fit_noise_level",
    "kurtosis_noise_map",
    "wavelet_noise_map",
]
