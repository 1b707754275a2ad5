"""Fuzzy and crisp c-partitions.

Partitions are plain numpy arrays: a fuzzy partition is a ``(c, n)``
membership matrix, a crisp partition is a length-``n`` vector of 0-based
cluster indices. Ties always go to the lowest cluster index.
"""

from __future__ import annotations

import numpy as np


class ParameterError(ValueError):
    pass


def fuzzy_memberships(distances, m=2.0):
    """Fuzzy c-means membership update from squared dissimilarities.

    ``u_ik = 1 / sum_j (d_ik / d_jk) ** (1 / (m - 1))``. Because ``d`` is
    already squared, the exponent is ``1/(m-1)`` rather than ``2/(m-1)``.
    A column with ``k`` zero distances splits its membership equally among
    those ``k`` clusters.

    Parameters
    ----------
    distances : array_like, shape (c, n)
        Nonnegative squared dissimilarities.
    m : float
        Fuzzifier, strictly greater than 1.

    Returns
    -------
    numpy.ndarray, shape (c, n)
    """
    if not m > 1:
        raise ParameterError(f"fuzzifier m must be > 1, got {m}")
    D = np.atleast_2d(np.asarray(distances, dtype=float))
    if np.any(D < 0) or not np.all(np.isfinite(D)):
        raise ParameterError("distances must be finite and nonnegative")
    c, n = D.shape
    U = np.empty_like(D)
    zero = D == 0.0
    singular = zero.any(axis=0)
    if singular.any():
        Z = zero[:, singular].astype(float)
        U[:, singular] = Z / Z.sum(axis=0)
    reg = ~singular
    if reg.any():
        Dr = D[:, reg]
        # u_ik = d_ik^(-e) / sum_j d_jk^(-e), scaled by the column minimum for range safety
        e = 1.0 / (m - 1.0)
        ratio = Dr.min(axis=0) / Dr
        W = ratio**e
        U[:, reg] = W / W.sum(axis=0)
    return U


def nearest_prototype(distances):
    """Label each column with its minimum-distance row (lowest index on ties)."""
    D = np.atleast_2d(np.asarray(distances, dtype=float))
    return np.argmin(D, axis=0)


def harden(U):
    """Maximum-membership hardening: per-column argmax (lowest index on ties)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    return np.argmax(U, axis=0)


def to_matrix(labels, c=None):
    """0/1 ``(c, n)`` matrix of a crisp label vector."""
    labels = np.asarray(labels, dtype=int)
    if c is None:
        c = int(labels.max()) + 1 if labels.size else 0
    M = np.zeros((c, labels.shape[0]))
    M[labels, np.arange(labels.shape[0])] = 1.0
    return M


def is_fuzzy_partition(U, tol=1e-10) -> bool:
    U = np.atleast_2d(np.asarray(U, dtype=float))
    return bool(
        np.all(U >= -tol)
        and np.all(U <= 1 + tol)
        and np.allclose(U.sum(axis=0), 1.0, rtol=0, atol=tol)
        and np.all(U.sum(axis=1) > 0)
    )
