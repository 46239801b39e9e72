"""Independent brute-force reference implementations.

Everything here is deliberately written the slow, obvious way (explicit
loops, set enumeration, rank statistics) and shares no code with the
library paths it checks.
"""

import numpy as np


def median_map(img, k):
    """Median filter by explicit neighborhood collection with edge replication."""
    h, w = img.shape
    r = k // 2
    out = np.empty_like(np.asarray(img, dtype=np.float64))
    for y in range(h):
        for x in range(w):
            vals = []
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    vals.append(img[yy, xx])
            out[y, x] = np.median(vals)
    return out


def morph_map(mask, mode, s):
    """Square-SE binary morphology; outside the frame counts as background."""
    h, w = mask.shape
    r = s // 2
    out = np.zeros((h, w), dtype=bool)
    m = mask > 0
    for y in range(h):
        for x in range(w):
            acc = []
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    yy, xx = y + dy, x + dx
                    inside = 0 <= yy < h and 0 <= xx < w
                    acc.append(m[yy, xx] if inside else False)
            out[y, x] = any(acc) if mode == "dilate" else all(acc)
    return out.astype(np.uint8) * 255


def gwl1_direct(mask, pred_quantized, s):
    """Literal evaluation of the weighted L1 definition via pixel sets."""
    dil = morph_map(mask, "dilate", s) > 0
    ero = morph_map(mask, "erode", s) > 0
    no_score = dil & ~ero
    mr = ero
    not_mr = ~dil
    er = mr.sum() + not_mr.sum()
    if er == 0:
        return None
    total = 0.0
    h, w = mask.shape
    for y in range(h):
        for x in range(w):
            wgt = 0.0 if no_score[y, x] else 1.0
            total += wgt * abs(float(mask[y, x]) - float(pred_quantized[y, x])) / 255.0
    return total / er


def rank_auc(mask, pred_quantized, s):
    """Mann-Whitney AUC (ties counted half) over the evaluated regions."""
    dil = morph_map(mask, "dilate", s) > 0
    ero = morph_map(mask, "erode", s) > 0
    pos = pred_quantized[ero]
    neg = pred_quantized[~dil]
    if pos.size == 0 or neg.size == 0:
        return None
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (pos.size * neg.size)


def moments(values):
    """Population variance and non-excess kurtosis by the defining sums."""
    values = [float(v) for v in values]
    n = len(values)
    mean = sum(values) / n
    m2 = sum((v - mean) ** 2 for v in values) / n
    m4 = sum((v - mean) ** 4 for v in values) / n
    kurt = m4 / m2**2 if m2 > 0 else float("nan")
    return m2, kurt


def haar_energies_3level(plane):
    """Subband energies of a 3-level Haar analysis via explicit 2x2 loops."""

    def level(x):
        h, w = x.shape[0] // 2 * 2, x.shape[1] // 2 * 2
        ll = np.empty((h // 2, w // 2))
        lh = np.empty_like(ll)
        hl = np.empty_like(ll)
        hh = np.empty_like(ll)
        for i in range(0, h, 2):
            for j in range(0, w, 2):
                a, b = x[i, j], x[i, j + 1]
                c, d = x[i + 1, j], x[i + 1, j + 1]
                ll[i // 2, j // 2] = (a + b + c + d) / 2
                lh[i // 2, j // 2] = (a + b - c - d) / 2
                hl[i // 2, j // 2] = (a - b + c - d) / 2
                hh[i // 2, j // 2] = (a - b - c + d) / 2
        return ll, lh, hl, hh

    x = np.asarray(plane, dtype=np.float64)
    energies = []
    for _ in range(3):
        x, lh, hl, hh = level(x)
        energies.extend([(lh**2).mean(), (hl**2).mean(), (hh**2).mean()])
    energies.append((x**2).mean())
    return energies


def dct2_matrix(n=8):
    """Orthonormal DCT-II basis matrix built from the defining cosine sums."""
    mat = np.zeros((n, n))
    for k in range(n):
        for i in range(n):
            mat[k, i] = np.cos(np.pi * k * (2 * i + 1) / (2 * n))
        mat[k] *= np.sqrt((1 if k == 0 else 2) / n)
    return mat
