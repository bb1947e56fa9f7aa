"""Numpy implementations of the hot kernels.

Every function here mirrors one in ``_kernels.pyx`` and accumulates in the
same order, so both backends return bit-identical arrays.
"""

import numpy as np

NAME = "python"


def seq_sum(x):
    flat = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    if flat.size == 0:
        return 0.0
    # add.accumulate is strictly left to right, unlike np.sum's pairwise tree
    return float(np.add.accumulate(flat)[-1])


def _taps_rows(src, k, width_out, edge):
    K = k.shape[0]
    if edge:
        r = K // 2
        src = np.pad(src, ((0, 0), (r, r)), mode="edge")
    acc = np.zeros((src.shape[0], width_out))
    for i in range(K):
        acc += k[i] * src[:, i:i + width_out]
    return acc


def conv_same(img, k):
    img = np.asarray(img, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    rows = _taps_rows(img, k, img.shape[1], True)
    return _taps_rows(rows.T, k, img.shape[0], True).T.copy()


def conv_valid(img, k):
    img = np.asarray(img, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    K = k.shape[0]
    rows = _taps_rows(img, k, img.shape[1] - K + 1, False)
    return _taps_rows(rows.T, k, img.shape[0] - K + 1, False).T.copy()


def haar_fwd(x):
    x = np.asarray(x, dtype=np.float64)
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    ll = (a + b + c + d) * 0.5
    lh = (a - b + c - d) * 0.5
    hl = (a + b - c - d) * 0.5
    hh = (a - b - c + d) * 0.5
    return ll, lh, hl, hh


def haar_inv(ll, lh, hl, hh):
    h, w = ll.shape
    out = np.empty((2 * h, 2 * w))
    out[0::2, 0::2] = (ll + lh + hl + hh) * 0.5
    out[0::2, 1::2] = (ll - lh + hl - hh) * 0.5
    out[1::2, 0::2] = (ll + lh - hl - hh) * 0.5
    out[1::2, 1::2] = (ll - lh - hl + hh) * 0.5
    return out


def sobel_mag(z):
    z = np.asarray(z, dtype=np.float64)
    gx = (z[:-2, 2:] + 2.0 * z[1:-1, 2:] + z[2:, 2:]) - (z[:-2, :-2] + 2.0 * z[1:-1, :-2] + z[2:, :-2])
    gy = (z[2:, :-2] + 2.0 * z[2:, 1:-1] + z[2:, 2:]) - (z[:-2, :-2] + 2.0 * z[:-2, 1:-1] + z[:-2, 2:])
    return np.sqrt(gx * gx + gy * gy)


def ncc_scores(ref, mov, max_shift):
    ref = np.asarray(ref, dtype=np.float64)
    mov = np.asarray(mov, dtype=np.float64)
    m = int(max_shift)
    H, W = mov.shape
    win = mov[m:H - m, m:W - m]
    n = win.size
    b = win - seq_sum(win) / n
    bb = b * b
    syy = seq_sum(bb)
    out = np.full((2 * m + 1, 2 * m + 1), np.nan)
    for dy in range(-m, m + 1):
        for dx in range(-m, m + 1):
            rw = ref[m - dy:H - m - dy, m - dx:W - m - dx]
            if rw.max() == rw.min():
                continue
            a = rw - seq_sum(rw) / n
            sxy = seq_sum(a * b)
            sxx = seq_sum(a * a)
            den = sxx * syy
            if den > 0.0:
                out[dy + m, dx + m] = sxy / np.sqrt(den)
    return out
