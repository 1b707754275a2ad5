"""External cluster validity indices built on the contingency table.

All entropies use natural logarithms with ``0 * log 0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sbd import DimensionError


@dataclass(frozen=True)
class PairCounts:
    a: int  # pairs together in both partitions
    b: int  # together in q only
    c: int  # together in u only
    d: int  # apart in both

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class CviReport:
    ri: float
    ari: float
    nmi: float
    vi: float

    def as_dict(self):
        return {"ri": self.ri, "ari": self.ari, "nmi": self.nmi, "vi": self.vi}


def contingency(u, q):
    """Co-occurrence counts ``n_ij = |{k : u_k = i-th label, q_k = j-th label}|``.

    Rows follow the sorted distinct labels of ``u``, columns those of ``q``.
    """
    u = np.asarray(u)
    q = np.asarray(q)
    if u.shape != q.shape or u.ndim != 1:
        raise DimensionError(f"partitions differ in size: {u.shape} vs {q.shape}")
    _, ui = np.unique(u, return_inverse=True)
    _, qi = np.unique(q, return_inverse=True)
    N = np.zeros((ui.max() + 1 if ui.size else 0, qi.max() + 1 if qi.size else 0), dtype=np.int64)
    np.add.at(N, (ui, qi), 1)
    return N


def pair_counts(N) -> PairCounts:
    N = np.asarray(N, dtype=np.int64)
    n = int(N.sum())
    sum_sq = int((N * N).sum())
    rows = N.sum(axis=1)
    cols = N.sum(axis=0)
    row_sq = int((rows * rows).sum())
    col_sq = int((cols * cols).sum())
    a = (sum_sq - n) // 2
    b = (col_sq - sum_sq) // 2
    c = (row_sq - sum_sq) // 2
    d = (n * n + sum_sq - row_sq - col_sq) // 2
    return PairCounts(a, b, c, d)


def rand_index(pc: PairCounts) -> float:
    total = pc.total
    if total == 0:
        return 1.0
    return (pc.a + pc.d) / total


def adjusted_rand(pc: PairCounts) -> float:
    """Hubert-Arabie adjusted Rand index.

    When the expected-index correction leaves a zero denominator the result
    is 1.0 for identical partitions and 0.0 otherwise.
    """
    a, b, c, d = (float(v) for v in (pc.a, pc.b, pc.c, pc.d))
    total = a + b + c + d
    identical = pc.b == 0 and pc.c == 0
    if total == 0:
        return 1.0
    expected = (a + c) * (a + b) / total
    denom = 0.5 * ((a + c) + (a + b)) - expected
    if denom == 0:
        return 1.0 if identical else 0.0
    return (a - expected) / denom


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def _mutual_information(N):
    N = np.asarray(N, dtype=float)
    n = N.sum()
    rows = N.sum(axis=1, keepdims=True)
    cols = N.sum(axis=0, keepdims=True)
    nz = N > 0
    pij = N[nz] / n
    outer = (rows @ cols)[nz] / (n * n)
    return float((pij * np.log(pij / outer)).sum())


def _is_relabeling(N):
    nz = np.asarray(N) > 0
    return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))


def variation_of_information(N) -> float:
    """Joint entropy minus mutual information; 0 iff the partitions coincide."""
    N = np.asarray(N, dtype=float)
    if _is_relabeling(N):
        return 0.0
    n = N.sum()
    joint = _entropy(N.ravel(), n)
    vi = joint - _mutual_information(N)
    return max(vi, 0.0)


def nmi_max(N) -> float:
    """Mutual information over the larger of the two marginal entropies.

    Two single-cluster partitions (both entropies zero) score 1.0.
    """
    N = np.asarray(N, dtype=float)
    n = N.sum()
    hu = _entropy(N.sum(axis=1), n)
    hq = _entropy(N.sum(axis=0), n)
    denom = max(hu, hq)
    if denom == 0 or _is_relabeling(N):
        return 1.0
    return float(min(max(_mutual_information(N) / denom, 0.0), 1.0))


def evaluate(u, q) -> CviReport:
    """RI, ARI, NMI_max and VI of candidate ``u`` against reference ``q``."""
    N = contingency(u, q)
    pc = pair_counts(N)
    return CviReport(
        ri=rand_index(pc),
        ari=adjusted_rand(pc),
        nmi=nmi_max(N),
        vi=variation_of_information(N),
    )
