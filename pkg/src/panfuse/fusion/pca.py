"""Principal components of band space, via cyclic Jacobi rotations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError, NumericError, UnsupportedBandCountError
from ..kernels import seq_sum
from ..raster import Raster
from ..stats import mean

MAX_SWEEPS = 100
TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Band-space mean and orthonormal components.

    ``components[k]`` is the k-th principal axis; rows are ordered by
    nonincreasing ``eigenvalues``. Each row's largest-magnitude entry is
    positive.
    """

    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray

    @property
    def bands(self) -> int:
        return self.mean.shape[0]


def band_covariance(ms: Raster) -> tuple[np.ndarray, np.ndarray]:
    """Band means and the (n-1)-normalized covariance of pixel vectors."""
    n = ms.width * ms.height
    mu = np.array([mean(ms.data[b]) for b in range(ms.bands)])
    centered = [ms.data[b] - mu[b] for b in range(ms.bands)]
    cov = np.empty((ms.bands, ms.bands))
    for i in range(ms.bands):
        for j in range(i, ms.bands):
            cov[i, j] = cov[j, i] = seq_sum(centered[i] * centered[j]) / (n - 1)
    return mu, cov


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return math.sqrt(seq_sum(off * off))


def jacobi_eigh(sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix.

    Returns ``(values, vectors)`` with eigenvectors in the columns, unsorted.
    Iterates until the off-diagonal Frobenius norm is at most 1e-12 * trace.
    """
    a = np.array(sym, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    limit = TOL * abs(float(np.trace(a)))
    for _ in range(MAX_SWEEPS + 1):
        if _off_norm(a) <= limit:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cols = a[:, [p, q]].copy()
                a[:, p] = c * cols[:, 0] - s * cols[:, 1]
                a[:, q] = s * cols[:, 0] + c * cols[:, 1]
                rows = a[[p, q], :].copy()
                a[p, :] = c * rows[0] - s * rows[1]
                a[q, :] = s * rows[0] + c * rows[1]
                a[p, q] = a[q, p] = 0.0
                vc = v[:, [p, q]].copy()
                v[:, p] = c * vc[:, 0] - s * vc[:, 1]
                v[:, q] = s * vc[:, 0] + c * vc[:, 1]
    raise NumericError(f"Jacobi eigensolve did not converge in {MAX_SWEEPS} sweeps")


def fit_pca(ms: Raster) -> PcaModel:
    if ms.bands < 2:
        raise UnsupportedBandCountError(f"PCA needs at least 2 bands, got {ms.bands}")
    n = ms.width * ms.height
    if n < ms.bands + 1:
        raise InsufficientDataError(f"PCA on {ms.bands} bands needs at least {ms.bands + 1} pixels, got {n}")
    mu, cov = band_covariance(ms)
    values, vectors = jacobi_eigh(cov)
    order = sorted(range(ms.bands), key=lambda i: -values[i])
    values = np.maximum(values[order], 0.0)
    comps = vectors[:, order].T.copy()
    for k in range(ms.bands):
        lead = int(np.argmax(np.abs(comps[k])))
        if comps[k, lead] < 0:
            comps[k] = -comps[k]
    return PcaModel(mu, comps, values)


def pca_forward(ms: Raster, model: PcaModel) -> Raster:
    """Score planes: ``score_k = components[k] . (pixel - mean)``."""
    centered = [ms.data[b] - model.mean[b] for b in range(model.bands)]
    scores = np.empty_like(ms.data)
    for k in range(model.bands):
        acc = model.components[k, 0] * centered[0]
        for b in range(1, model.bands):
            acc = acc + model.components[k, b] * centered[b]
        scores[k] = acc
    return ms.with_data(scores, keep_names=False)


def pca_inverse(scores: Raster, model: PcaModel) -> Raster:
    out = np.empty_like(scores.data)
    for b in range(model.bands):
        acc = scores.data[0] * model.components[0, b]
        for k in range(1, model.bands):
            acc = acc + scores.data[k] * model.components[k, b]
        out[b] = model.mean[b] + acc
    return scores.with_data(out, keep_names=False)
