"""Shape-based distance: coefficient-normalized cross-correlation via FFT.

Lags are reported with the convention ``R_k(x, y) = sum_j x[j + k] * y[j]``
for ``k >= 0`` and ``R_k(x, y) = R_{-k}(y, x)`` for ``k < 0``. A positive
shift therefore means ``y`` must be delayed by ``k`` samples to line up with
``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """Raised when two series (or a series and a centroid) differ in length."""


@dataclass(frozen=True)
class SbdResult:
    dist: float
    shift: int
    aligned: np.ndarray


def fft_length(p: int) -> int:
    """Smallest power of two that holds a full linear correlation of length-p inputs."""
    return 1 << int(np.ceil(np.log2(2 * p - 1)))


def _check_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise DimensionError("expected 1-D series")
    if x.shape[0] != y.shape[0]:
        raise DimensionError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    return x, y


def _unwrap(cc, p):
    # circular output -> lags -(p-1) .. p-1 along the last axis
    return np.concatenate([cc[..., -(p - 1):], cc[..., :p]], axis=-1) if p > 1 else cc[..., :1]


def fft_cross_correlate(x, y) -> np.ndarray:
    """All ``2p - 1`` lag products of ``x`` against ``y``.

    Entry ``w`` (0-based) holds ``R_{w-(p-1)}(x, y)``, so the middle entry is
    the zero-lag inner product.
    """
    x, y = _check_pair(x, y)
    p = x.shape[0]
    L = fft_length(p)
    cc = np.fft.irfft(np.fft.rfft(x, L) * np.conj(np.fft.rfft(y, L)), L)
    return _unwrap(cc, p)


def shift_series(y, shift: int) -> np.ndarray:
    """Slide ``y`` by ``shift`` samples, filling the vacated end with zeros."""
    y = np.asarray(y, dtype=float)
    p = y.shape[-1]
    out = np.zeros_like(y)
    if shift >= 0:
        if shift < p:
            out[..., shift:] = y[..., : p - shift]
    else:
        s = -shift
        if s < p:
            out[..., : p - s] = y[..., s:]
    return out


def sbd(x, y) -> SbdResult:
    """Shape-based distance between ``x`` and ``y``, plus ``y`` aligned to ``x``.

    ``dist = 1 - max_w CC_w(x, y) / (||x|| ||y||)`` lies in ``[0, 2]``.
    Ties in the maximum go to the most negative lag. If either operand is the
    all-zero series the distance is 1.0 (no correlation), the shift is 0 and
    ``y`` is returned unshifted.
    """
    x, y = _check_pair(x, y)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        return SbdResult(1.0, 0, y.copy())
    ncc = fft_cross_correlate(x, y) / (nx * ny)
    idx = int(np.argmax(ncc))
    p = x.shape[0]
    shift = idx - (p - 1)
    dist = float(np.clip(1.0 - ncc[idx], 0.0, 2.0))
    return SbdResult(dist, shift, shift_series(y, shift))


class SeriesSpectra:
    """Cached spectra of a row stack, so repeated SBD sweeps skip the forward FFT."""

    def __init__(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        self.X = X
        self.p = X.shape[1]
        self.L = fft_length(self.p)
        self.norms = np.linalg.norm(X, axis=1)
        self.conj_spec = np.conj(np.fft.rfft(X, self.L, axis=1))


def sbd_matrix(centroids, X, spectra: SeriesSpectra | None = None):
    """SBD from every centroid to every series.

    Returns ``(dist, shift)``, both of shape ``(c, n)``; ``dist[i, k]`` equals
    ``sbd(centroids[i], X[k]).dist``.
    """
    V = np.atleast_2d(np.asarray(centroids, dtype=float))
    if spectra is None:
        spectra = SeriesSpectra(X)
    if V.shape[1] != spectra.p:
        raise DimensionError(f"length mismatch: {V.shape[1]} vs {spectra.p}")
    p, L = spectra.p, spectra.L
    c, n = V.shape[0], spectra.X.shape[0]
    dist = np.ones((c, n))
    shift = np.zeros((c, n), dtype=int)
    vnorm = np.linalg.norm(V, axis=1)
    Vspec = np.fft.rfft(V, L, axis=1)
    live = spectra.norms > 0
    for i in range(c):
        if vnorm[i] == 0.0:
            continue
        cc = np.fft.irfft(Vspec[i] * spectra.conj_spec[live], L, axis=1)
        ncc = _unwrap(cc, p) / (vnorm[i] * spectra.norms[live, None])
        idx = np.argmax(ncc, axis=1)
        best = ncc[np.arange(ncc.shape[0]), idx]
        dist[i, live] = np.clip(1.0 - best, 0.0, 2.0)
        shift[i, live] = idx - (p - 1)
    return dist, shift
