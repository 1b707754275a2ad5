"""Cluster prototypes: shape extraction and weighted means."""

from __future__ import annotations

import numpy as np

from .sbd import sbd, sbd_matrix, shift_series
from .series import z_normalize


class EmptyClusterError(ValueError):
    """Raised when a prototype is requested for a cluster with no members."""


class DegenerateWeightsError(ValueError):
    pass


POWER_TOL = 1e-10
POWER_MAX_STEPS = 10_000

# fixed, index-free start vector for the power iteration when no reference exists
_START_SEED = 20190613


def _fallback_start(p):
    v = np.random.default_rng(_START_SEED).standard_normal(p)
    v -= v.mean()
    return v / np.linalg.norm(v)


def align_members(members, reference):
    """Shift every member toward ``reference`` by its SBD-optimal lag.

    An all-zero reference (no centroid yet) leaves members untouched.
    """
    members = np.atleast_2d(np.asarray(members, dtype=float))
    reference = np.asarray(reference, dtype=float)
    if not np.any(reference):
        return members.copy()
    _, shifts = sbd_matrix(reference[None, :], members)
    return np.stack([shift_series(x, int(s)) for x, s in zip(members, shifts[0])])


def rayleigh_matrix(aligned):
    """``M = Q^T S Q`` with ``S = X'^T X'`` and ``Q = I - (1/p) 11^T``."""
    aligned = np.atleast_2d(np.asarray(aligned, dtype=float))
    p = aligned.shape[1]
    S = aligned.T @ aligned
    Q = np.eye(p) - np.full((p, p), 1.0 / p)
    M = Q.T @ S @ Q
    return 0.5 * (M + M.T)


def dominant_eigenvector(matvec, p, start=None, tol=POWER_TOL, max_steps=POWER_MAX_STEPS):
    """Power iteration for the top eigenpair of a positive semidefinite operator.

    Stops when the angle between successive unit iterates drops below ``tol``.
    Returns ``(v, lam, converged)``; ``v`` is the zero vector if the operator
    annihilates every start tried.
    """
    starts = []
    if start is not None and np.any(start):
        starts.append(np.asarray(start, dtype=float) / np.linalg.norm(start))
    starts.append(_fallback_start(p))
    for v in starts:
        w = matvec(v)
        lam = np.linalg.norm(w)
        if lam <= 1e-300:
            continue
        v = w / lam
        for _ in range(max_steps):
            w = matvec(v)
            lam = np.linalg.norm(w)
            if lam == 0.0:
                break
            w /= lam
            # sin of the angle between iterates, stable near zero
            angle = np.linalg.norm(w - v * np.dot(w, v))
            v = w
            if angle < tol:
                return v, lam, True
        else:
            return v, lam, False
    return np.zeros(p), 0.0, True


def top_eigenpair(aligned, start):
    """Dominant eigenvector of the Rayleigh matrix of ``aligned``.

    Works on the row-centered stack ``Y = X'Q`` (so ``M = Y^T Y``) when there
    are fewer members than samples; otherwise forms ``M`` explicitly.
    """
    k, p = aligned.shape
    if k < p:
        Y = aligned - aligned.mean(axis=1, keepdims=True)

        def matvec(v):
            return Y.T @ (Y @ v)

        def full():
            return Y.T @ Y
    else:
        M = rayleigh_matrix(aligned)

        def matvec(v):
            return M @ v

        def full():
            return M

    v, lam, converged = dominant_eigenvector(matvec, p, start=start)
    if not converged:
        # near-degenerate top eigenvalues: finish with a direct solve
        from scipy.linalg import eigh

        w, vecs = eigh(full(), subset_by_index=[p - 1, p - 1])
        v, lam = vecs[:, 0], float(w[0])
    return v, lam


def shape_extract(members, reference):
    """New shape prototype for one cluster.

    Members are aligned to ``reference`` with SBD, the Rayleigh quotient of
    the aligned stack is maximized, and the maximizer is z-normalized. Of the
    two signs, the one closer (in SBD) to the reference wins; with an all-zero
    reference the sign agreeing with the first member wins.

    Parameters
    ----------
    members : array_like, shape (k, p)
    reference : array_like, shape (p,)

    Returns
    -------
    numpy.ndarray, shape (p,)
    """
    members = np.asarray(members, dtype=float)
    if members.size == 0 or members.shape[0] == 0:
        raise EmptyClusterError("cannot extract a shape from an empty cluster")
    members = np.atleast_2d(members)
    reference = np.asarray(reference, dtype=float)
    if reference.shape[0] != members.shape[1]:
        raise ValueError("reference length differs from member length")

    aligned = align_members(members, reference)
    has_ref = bool(np.any(reference))
    start = reference - reference.mean() if has_ref else None
    v, _ = top_eigenpair(aligned, start)
    if not np.any(v):
        return np.zeros(members.shape[1])
    v = z_normalize(v)
    if has_ref:
        if sbd(-v, reference).dist < sbd(v, reference).dist:
            v = -v
    elif np.dot(v, aligned[0]) < 0:
        v = -v
    return v


def mean_prototype(members, weights):
    """Weighted elementwise mean of ``members``.

    For fuzzy c-means pass ``u_ik ** m`` as the weights; for hard c-means
    pass the 0/1 memberships.
    """
    members = np.atleast_2d(np.asarray(members, dtype=float))
    w = np.asarray(weights, dtype=float)
    if w.shape[0] != members.shape[0]:
        raise ValueError("weights and members differ in length")
    if np.any(w < 0):
        raise DegenerateWeightsError("weights must be nonnegative")
    total = w.sum()
    if not total > 0:
        raise DegenerateWeightsError("weights sum to zero")
    return (w @ members) / total


def mean_prototypes(X, weights):
    """All ``c`` weighted means at once; ``weights`` has shape ``(c, n)``."""
    W = np.asarray(weights, dtype=float)
    totals = W.sum(axis=1)
    if np.any(totals <= 0):
        raise DegenerateWeightsError("a prototype has zero total weight")
    return (W @ np.asarray(X, dtype=float)) / totals[:, None]


__all__ = [
    "EmptyClusterError",
    "DegenerateWeightsError",
    "align_members",
    "rayleigh_matrix",
    "dominant_eigenvector",
    "top_eigenpair",
    "shape_extract",
    "mean_prototype",
    "mean_prototypes",
]
