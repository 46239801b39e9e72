"""Orthonormal Haar wavelet transforms.

The 2x2 analysis is exact in float arithmetic: for a tile [[a, b], [c, d]]
the subbands are LL = (a+b+c+d)/2, LH = (a+b-c-d)/2, HL = (a-b+c-d)/2 and
HH = (a-b-c+d)/2, so white noise keeps its variance in every subband.
"""

import numpy as np

from ..errors import InvalidInputError
from ..validation import check_image


def haar_decompose(img):
    """One level of the orthonormal 2-D Haar transform.

    Returns (ll, lh, hl, hh) at half resolution; a trailing odd row or
    column is dropped.
    """
    arr = check_image(img)
    if arr.ndim != 2:
        raise InvalidInputError("haar transform expects a single-channel image")
    h, w = arr.shape
    if h < 2 or w < 2:
        raise InvalidInputError("image must be at least 2x2 for a haar level")
    h -= h % 2
    w -= w % 2
    x = arr[:h, :w]
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    ll = (a + b + c + d) / 2.0
    lh = (a + b - c - d) / 2.0
    hl = (a - b + c - d) / 2.0
    hh = (a - b - c + d) / 2.0
    return ll, lh, hl, hh


def haar_hh(img):
    """The diagonal (HH) subband of a one-level Haar transform."""
    return haar_decompose(img)[3]
