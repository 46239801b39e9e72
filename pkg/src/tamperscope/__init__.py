"""tamperscope: learning-free image forgery localization and evaluation."""

__version__ = "0.1.0"

from .aen import (
    LossWeights,
    Patch,
    TripletBatch,
    enhancement_loss,
    extract_patches,
    mine_triplets,
    reference_features,
    smape,
)
from .detectors import DETECTORS, make_detector
from .errors import (
    InvalidInputError,
    NoTripletsError,
    SpecError,
    TamperscopeError,
    UndefinedScoreError,
)
from .scoring import (
    DetectorAggregate,
    ScoreRow,
    ScoreWeights,
    aggregate,
    auc,
    gwl1,
    no_score_weights,
    pristine_mask,
)
from .synth import CorpusItem, SynthSpec, corpus, corpus_digest, matched_template, synth

__all__ = [
    "__version__",
    "DETECTORS",
    "make_detector",
    "TamperscopeError",
    "InvalidInputError",
    "SpecError",
    "UndefinedScoreError",
    "NoTripletsError",
    "ScoreWeights",
    "ScoreRow",
    "DetectorAggregate",
    "no_score_weights",
    "gwl1",
    "auc",
    "pristine_mask",
    "aggregate",
    "SynthSpec",
    "CorpusItem",
    "synth",
    "corpus",
    "corpus_digest",
    "matched_template",
    "smape",
    "Patch",
    "TripletBatch",
    "LossWeights",
    "enhancement_loss",
    "extract_patches",
    "mine_triplets",
    "reference_features",
]
