"""Common estimator surface for the eight learning-free detectors.

Detectors follow the scikit-learn estimator protocol: hyperparameters live
in ``__init__`` (so ``get_params`` / ``set_params`` / ``clone`` work), and
``fit`` is a no-op kept for pipeline compatibility since nothing is
learned.  ``predict`` maps one decoded image to a heatmap in [0, 1] with
the fixed polarity "higher = more likely manipulated".
"""

from sklearn.base import BaseEstimator

from ..imaging.ops import to_luma
from ..validation import check_color_image, check_image


class BaseDetector(BaseEstimator):
    #: True when the detector needs all three color channels.
    requires_color = False

    def fit(self, X=None, y=None):
        """No-op; the detectors are learning-free."""
        return self

    def predict(self, image):
        """Compute the manipulation heatmap for one image.

        ``image`` is a (H, W) or (H, W, 3) array on the 0-255 scale; the
        returned heatmap has the same spatial dimensions and values in
        [0, 1].
        """
        if self.requires_color:
            image = check_color_image(image)
        else:
            image = check_image(image)
        return self._score_image(image)

    def _score_image(self, image):
        raise NotImplementedError

    @staticmethod
    def _luma(image):
        return image if image.ndim == 2 else to_luma(image)
