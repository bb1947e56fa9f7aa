# cython: language_level=3
"""Compiled hot kernels. Same contracts and accumulation order as _kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, NAN

cnp.import_array()

NAME = "cython"


def seq_sum(x):
    cdef const double[::1] v = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += v[i]
    return acc


cdef void _rows_edge(const double[:, :] src, const double[::1] k, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t H = src.shape[0], W = src.shape[1], K = k.shape[0]
    cdef Py_ssize_t r = K // 2, y, x, i, j
    cdef double acc
    for y in range(H):
        for x in range(W):
            acc = 0.0
            for i in range(K):
                j = x + i - r
                if j < 0:
                    j = 0
                elif j >= W:
                    j = W - 1
                acc += k[i] * src[y, j]
            out[y, x] = acc


cdef void _cols_edge(const double[:, ::1] src, const double[::1] k, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t H = src.shape[0], W = src.shape[1], K = k.shape[0]
    cdef Py_ssize_t r = K // 2, y, x, i, j
    cdef double acc
    for y in range(H):
        for x in range(W):
            acc = 0.0
            for i in range(K):
                j = y + i - r
                if j < 0:
                    j = 0
                elif j >= H:
                    j = H - 1
                acc += k[i] * src[j, x]
            out[y, x] = acc


def conv_same(img, k):
    cdef const double[:, :] src = np.asarray(img, dtype=np.float64)
    cdef const double[::1] kk = np.ascontiguousarray(k, dtype=np.float64)
    H, W = src.shape[0], src.shape[1]
    tmp = np.empty((H, W))
    out = np.empty((H, W))
    cdef double[:, ::1] t = tmp
    cdef double[:, ::1] o = out
    with nogil:
        _rows_edge(src, kk, t)
        _cols_edge(t, kk, o)
    return out


def conv_valid(img, k):
    cdef const double[:, :] src = np.asarray(img, dtype=np.float64)
    cdef const double[::1] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t H = src.shape[0], W = src.shape[1], K = kk.shape[0]
    cdef Py_ssize_t Wo = W - K + 1, Ho = H - K + 1, y, x, i
    cdef double acc
    tmp = np.empty((H, Wo))
    out = np.empty((Ho, Wo))
    cdef double[:, ::1] t = tmp
    cdef double[:, ::1] o = out
    with nogil:
        for y in range(H):
            for x in range(Wo):
                acc = 0.0
                for i in range(K):
                    acc += kk[i] * src[y, x + i]
                t[y, x] = acc
        for y in range(Ho):
            for x in range(Wo):
                acc = 0.0
                for i in range(K):
                    acc += kk[i] * t[y + i, x]
                o[y, x] = acc
    return out


def haar_fwd(x):
    cdef const double[:, :] s = np.asarray(x, dtype=np.float64)
    cdef Py_ssize_t h = s.shape[0] // 2, w = s.shape[1] // 2, i, j
    cdef double a, b, c, d
    ll = np.empty((h, w)); lh = np.empty((h, w)); hl = np.empty((h, w)); hh = np.empty((h, w))
    cdef double[:, ::1] LL = ll, LH = lh, HL = hl, HH = hh
    with nogil:
        for i in range(h):
            for j in range(w):
                a = s[2 * i, 2 * j]
                b = s[2 * i, 2 * j + 1]
                c = s[2 * i + 1, 2 * j]
                d = s[2 * i + 1, 2 * j + 1]
                LL[i, j] = (a + b + c + d) * 0.5
                LH[i, j] = (a - b + c - d) * 0.5
                HL[i, j] = (a + b - c - d) * 0.5
                HH[i, j] = (a - b - c + d) * 0.5
    return ll, lh, hl, hh


def haar_inv(ll, lh, hl, hh):
    cdef const double[:, :] LL = np.asarray(ll, dtype=np.float64)
    cdef const double[:, :] LH = np.asarray(lh, dtype=np.float64)
    cdef const double[:, :] HL = np.asarray(hl, dtype=np.float64)
    cdef const double[:, :] HH = np.asarray(hh, dtype=np.float64)
    cdef Py_ssize_t h = LL.shape[0], w = LL.shape[1], i, j
    cdef double p, q, r, t
    out = np.empty((2 * h, 2 * w))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(h):
            for j in range(w):
                p = LL[i, j]; q = LH[i, j]; r = HL[i, j]; t = HH[i, j]
                o[2 * i, 2 * j] = (p + q + r + t) * 0.5
                o[2 * i, 2 * j + 1] = (p - q + r - t) * 0.5
                o[2 * i + 1, 2 * j] = (p + q - r - t) * 0.5
                o[2 * i + 1, 2 * j + 1] = (p - q - r + t) * 0.5
    return out


def sobel_mag(img):
    cdef const double[:, :] z = np.asarray(img, dtype=np.float64)
    cdef Py_ssize_t H = z.shape[0], W = z.shape[1], y, x
    cdef double gx, gy
    out = np.empty((H - 2, W - 2))
    cdef double[:, ::1] o = out
    with nogil:
        for y in range(1, H - 1):
            for x in range(1, W - 1):
                gx = (z[y - 1, x + 1] + 2.0 * z[y, x + 1] + z[y + 1, x + 1]) - (
                    z[y - 1, x - 1] + 2.0 * z[y, x - 1] + z[y + 1, x - 1])
                gy = (z[y + 1, x - 1] + 2.0 * z[y + 1, x] + z[y + 1, x + 1]) - (
                    z[y - 1, x - 1] + 2.0 * z[y - 1, x] + z[y - 1, x + 1])
                o[y - 1, x - 1] = sqrt(gx * gx + gy * gy)
    return out


def ncc_scores(ref, mov, max_shift):
    cdef const double[:, :] R = np.asarray(ref, dtype=np.float64)
    cdef const double[:, :] M = np.asarray(mov, dtype=np.float64)
    cdef Py_ssize_t m = max_shift, H = M.shape[0], W = M.shape[1]
    cdef Py_ssize_t y, x, dy, dx, n = (H - 2 * m) * (W - 2 * m)
    cdef double mm = 0.0, mr, syy = 0.0, sxy, sxx, a, b, v, lo, hi, den
    out = np.full((2 * m + 1, 2 * m + 1), np.nan)
    cdef double[:, ::1] o = out
    with nogil:
        for y in range(m, H - m):
            for x in range(m, W - m):
                mm += M[y, x]
        mm = mm / n
        for y in range(m, H - m):
            for x in range(m, W - m):
                b = M[y, x] - mm
                syy += b * b
        for dy in range(-m, m + 1):
            for dx in range(-m, m + 1):
                mr = 0.0
                lo = R[m - dy, m - dx]
                hi = lo
                for y in range(m, H - m):
                    for x in range(m, W - m):
                        v = R[y - dy, x - dx]
                        mr += v
                        if v < lo:
                            lo = v
                        if v > hi:
                            hi = v
                if lo == hi:
                    continue
                mr = mr / n
                sxy = 0.0
                sxx = 0.0
                for y in range(m, H - m):
                    for x in range(m, W - m):
                        a = R[y - dy, x - dx] - mr
                        b = M[y, x] - mm
                        sxy += a * b
                        sxx += a * a
                den = sxx * syy
                if den > 0.0:
                    o[dy + m, dx + m] = sxy / sqrt(den)
    return out
