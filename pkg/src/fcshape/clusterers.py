"""Alternating-optimization clusterers: FCM/HCM, k-Shape, FCS+ and FCS++.

Every clusterer is a pure function of ``(data, cfg)`` and records the
objective ``J_m = sum_k sum_i u_ik^m * d_ik`` after each iteration, where
``d`` is the squared Euclidean distance or the SBD value itself (SBD stands in
for the squared dissimilarity).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .partition import fuzzy_memberships, harden, nearest_prototype
from .prototype import shape_extract
from .sbd import SeriesSpectra, sbd_matrix
from .series import Dataset

ALGORITHMS = ("hcm", "fcm", "kshape", "fcs+", "fcs++")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ClusterConfig:
    c: int
    m: float = 2.0
    max_iter: int = 100
    epsilon: float = 1e-6
    seed: int = 0
    distance: str = "euclidean"
    init: str = "sample-prototypes"
    # treat SBD as an unsquared distance (its square enters the objective)
    sbd_unsquared: bool = False

    def validate(self, n: int) -> None:
        if not isinstance(self.c, (int, np.integer)) or self.c < 2:
            raise ConfigError(f"cluster count must be an integer >= 2, got {self.c!r}")
        if self.c >= n:
            raise ConfigError(f"cluster count c={self.c} must be smaller than n={n}")
        if self.m < 1:
            raise ConfigError(f"fuzzifier m must be >= 1, got {self.m}")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be positive")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be > 0")
        if self.distance not in ("euclidean", "sbd"):
            raise ConfigError(f"unknown distance {self.distance!r}")
        if self.init not in ("sample-prototypes", "random-assignment"):
            raise ConfigError(f"unknown init {self.init!r}")

    def to_dict(self):
        return asdict(self)


@dataclass
class ClusterResult:
    labels: np.ndarray
    centroids: np.ndarray
    objective_trace: list
    iterations: int
    elapsed_seconds: float = 0.0
    memberships: np.ndarray | None = None
    prototype_kind: str = "mean"
    empty_cluster_events: int = 0
    algorithm: str = ""
    config: dict = field(default_factory=dict)


def _rng(seed):
    return np.random.default_rng(np.uint64(seed % (1 << 64)))


def _initial_state(X, cfg, zero_centroids):
    """Initial centroids plus, for random assignment, the drawn labels."""
    rng = _rng(cfg.seed)
    n, p = X.shape
    if cfg.init == "sample-prototypes":
        idx = rng.choice(n, size=cfg.c, replace=False)
        return X[idx].copy(), None
    labels = rng.integers(0, cfg.c, size=n)
    if zero_centroids:
        return np.zeros((cfg.c, p)), labels
    V = np.empty((cfg.c, p))
    for i in range(cfg.c):
        members = X[labels == i]
        V[i] = members.mean(axis=0) if len(members) else X[rng.integers(n)]
    return V, labels


class _Distances:
    """Squared dissimilarities from a centroid stack to every series."""

    def __init__(self, X, cfg):
        self.X = X
        self.sbd = cfg.distance == "sbd"
        self.unsquared = cfg.sbd_unsquared
        if self.sbd:
            self.spectra = SeriesSpectra(X)
        else:
            self.sq_norms = np.einsum("ij,ij->i", X, X)

    def __call__(self, V):
        if self.sbd:
            D, _ = sbd_matrix(V, self.X, self.spectra)
            return D**2 if self.unsquared else D
        vv = np.einsum("ij,ij->i", V, V)
        D = vv[:, None] + self.sq_norms[None, :] - 2.0 * (V @ self.X.T)
        return np.maximum(D, 0.0)


def _objective(U, D, m):
    if m == 1:
        return float(np.sum(U * D))
    return float(np.sum((U**m) * D))


def _crisp_objective(labels, D):
    return float(D[labels, np.arange(D.shape[1])].sum())


def _check(data, cfg):
    if not isinstance(data, Dataset):
        data = Dataset(np.asarray(data, dtype=float))
    cfg.validate(data.n)
    return data


def _initial_centroids(X, cfg, init_centroids, zero_centroids):
    if init_centroids is None:
        return _initial_state(X, cfg, zero_centroids)
    V = np.array(init_centroids, dtype=float)
    if V.shape != (cfg.c, X.shape[1]):
        raise ConfigError(f"initial centroids must have shape {(cfg.c, X.shape[1])}")
    return V, None


def fcm(data, cfg: ClusterConfig, init_centroids=None) -> ClusterResult:
    """Alternating optimization c-means with mean prototypes.

    ``m > 1`` runs fuzzy c-means; ``m == 1`` runs hard c-means. With
    ``cfg.distance == "sbd"`` and ``m > 1`` this is FCS+. Iteration stops when
    the objective changes by less than ``epsilon`` or after ``max_iter``
    updates. An empty hard cluster keeps its previous centroid.
    """
    data = _check(data, cfg)
    X = data.X
    c, n = cfg.c, data.n
    t0 = time.perf_counter()
    dist = _Distances(X, cfg)
    V, labels0 = _initial_centroids(X, cfg, init_centroids, zero_centroids=False)
    crisp = cfg.m == 1

    def update_U(D):
        if crisp:
            lab = nearest_prototype(D)
            U = np.zeros((c, n))
            U[lab, np.arange(n)] = 1.0
            return U
        return fuzzy_memberships(D, cfg.m)

    D = dist(V)
    U = update_U(D)
    J_prev = _objective(U, D, cfg.m)
    trace = []
    empty = 0
    t = 0
    E = np.inf
    while t < cfg.max_iter and E >= cfg.epsilon:
        if t > 0:
            U = update_U(D)
        W = U if crisp else U**cfg.m
        totals = W.sum(axis=1)
        keep = totals <= 0
        if keep.any():
            empty += int(keep.sum())
            totals = np.where(keep, 1.0, totals)
        V_new = (W @ X) / totals[:, None]
        V_new[keep] = V[keep]
        V = V_new
        D = dist(V)
        J = _objective(U, D, cfg.m)
        trace.append(J)
        E = abs(J - J_prev)
        J_prev = J
        t += 1

    if crisp:
        final_labels = np.argmax(U, axis=0)
        memberships = None
    else:
        final_labels = harden(U)
        memberships = U
    algorithm = ("fcs+" if cfg.distance == "sbd" else "fcm") if not crisp else "hcm"
    return ClusterResult(
        labels=final_labels,
        centroids=V,
        objective_trace=trace,
        iterations=t,
        elapsed_seconds=time.perf_counter() - t0,
        memberships=memberships,
        prototype_kind="mean",
        empty_cluster_events=empty,
        algorithm=algorithm,
        config=cfg.to_dict(),
    )


def fcs_plus(data, cfg: ClusterConfig, init_centroids=None) -> ClusterResult:
    """Fuzzy c-means with SBD as the squared dissimilarity and mean prototypes.

    The terminal fuzzy partition is kept in ``memberships``; ``labels`` is its
    maximum-membership hardening.
    """
    if not cfg.m > 1:
        raise ConfigError("fcs+ requires m > 1")
    cfg = _with(cfg, distance="sbd")
    return fcm(data, cfg, init_centroids)


def _with(cfg, **changes):
    d = cfg.to_dict()
    d.update(changes)
    return ClusterConfig(**d)


def _refine(X, labels, V):
    """Shape-extract every cluster; empty clusters keep their centroid."""
    V_new = V.copy()
    empty = 0
    for j in range(V.shape[0]):
        members = X[labels == j]
        if len(members) == 0:
            empty += 1
            continue
        V_new[j] = shape_extract(members, V[j])
    return V_new, empty


def kshape(data, cfg: ClusterConfig, init_centroids=None) -> ClusterResult:
    """k-Shape: SBD assignment alternating with shape-extraction refinement.

    Stops as soon as an assignment reproduces the previous label vector, or
    after ``max_iter`` iterations.
    """
    cfg = _with(cfg, distance="sbd")
    data = _check(data, cfg)
    X = data.X
    t0 = time.perf_counter()
    dist = _Distances(X, cfg)
    V, labels = _initial_centroids(X, cfg, init_centroids, zero_centroids=True)
    if labels is None:
        labels = nearest_prototype(dist(V))
    prev = None
    trace = []
    empty = 0
    it = 0
    while (prev is None or not np.array_equal(labels, prev)) and it < cfg.max_iter:
        prev = labels
        V, e = _refine(X, labels, V)
        empty += e
        D = dist(V)
        labels = nearest_prototype(D)
        trace.append(_crisp_objective(labels, D))
        it += 1
    return ClusterResult(
        labels=labels,
        centroids=V,
        objective_trace=trace,
        iterations=it,
        elapsed_seconds=time.perf_counter() - t0,
        prototype_kind="shape-extracted",
        empty_cluster_events=empty,
        algorithm="kshape",
        config=cfg.to_dict(),
    )


def fcs_plus_plus(data, cfg: ClusterConfig, init_centroids=None) -> ClusterResult:
    """FCS++: fuzzy SBD memberships, hardened, then shape-extraction refinement.

    Terminates when the Frobenius norm of the centroid change is below
    ``epsilon`` or after ``max_iter`` iterations. The trace holds
    ``sum_k SBD(x_k, v_{u_k})`` for the hardened labels and refreshed centroids.
    """
    if not cfg.m > 1:
        raise ConfigError("fcs++ requires m > 1")
    cfg = _with(cfg, distance="sbd")
    data = _check(data, cfg)
    X = data.X
    t0 = time.perf_counter()
    dist = _Distances(X, cfg)
    V, labels0 = _initial_centroids(X, cfg, init_centroids, zero_centroids=True)
    D = dist(V)
    trace = []
    empty = 0
    t = 0
    E = np.inf
    U = None
    labels = labels0
    while t < cfg.max_iter and E >= cfg.epsilon:
        if t == 0 and labels0 is not None:
            # random assignment seeds the first refinement directly
            U = np.zeros((cfg.c, data.n))
            U[labels0, np.arange(data.n)] = 1.0
        else:
            U = fuzzy_memberships(D, cfg.m)
            labels = harden(U)
        V_new, e = _refine(X, labels, V)
        empty += e
        E = float(np.linalg.norm(V_new - V))
        V = V_new
        D = dist(V)
        trace.append(_crisp_objective(labels, D))
        t += 1
    return ClusterResult(
        labels=np.asarray(labels),
        centroids=V,
        objective_trace=trace,
        iterations=t,
        elapsed_seconds=time.perf_counter() - t0,
        memberships=U,
        prototype_kind="shape-extracted",
        empty_cluster_events=empty,
        algorithm="fcs++",
        config=cfg.to_dict(),
    )


def run(algorithm: str, data, cfg: ClusterConfig, init_centroids=None) -> ClusterResult:
    """Dispatch by name: ``hcm``, ``fcm``, ``kshape``, ``fcs+`` or ``fcs++``."""
    if algorithm == "hcm":
        return fcm(data, _with(cfg, m=1.0, distance="euclidean"), init_centroids)
    if algorithm == "fcm":
        if not cfg.m > 1:
            raise ConfigError("fcm requires m > 1 (use hcm for m = 1)")
        return fcm(data, _with(cfg, distance="euclidean"), init_centroids)
    if algorithm == "kshape":
        return kshape(data, cfg, init_centroids)
    if algorithm == "fcs+":
        return fcs_plus(data, cfg, init_centroids)
    if algorithm == "fcs++":
        return fcs_plus_plus(data, cfg, init_centroids)
    raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
