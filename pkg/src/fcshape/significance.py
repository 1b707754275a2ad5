"""Nonparametric comparison of algorithms across datasets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata


@dataclass(frozen=True)
class WilcoxonOutcome:
    r_plus: float
    r_minus: float
    p_value: float
    n_effective: int
    alpha: float = 0.05

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha


@dataclass(frozen=True)
class FriedmanOutcome:
    avg_ranks: np.ndarray
    statistic: float
    p_value: float
    k: int
    n: int
    alpha: float = 0.05

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha


def _normal_sf(z):
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def chi2_sf(x, df):
    """Upper tail of the chi-square distribution (regularized upper gamma)."""
    if x <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def _signed_rank_tail(r, ranks):
    """P(T >= r) for the signed-rank sum ``T`` of the given rank magnitudes.

    Normal approximation with a 0.5 continuity correction, refined by the
    Edgeworth terms for the fourth and sixth cumulants. ``T`` is a sum of
    independent ``a_i * Bernoulli(1/2)`` so its cumulants are exact sums over
    the (possibly tied) ranks; the odd ones vanish.
    """
    k2 = float((ranks**2).sum()) / 4.0
    k4 = -float((ranks**4).sum()) / 8.0
    k6 = float((ranks**6).sum()) / 4.0
    mean = float(ranks.sum()) / 2.0
    z = max(abs(r - mean) - 0.5, 0.0) / math.sqrt(k2)
    g2 = k4 / k2**2
    g4 = k6 / k2**3
    he3 = z**3 - 3 * z
    he5 = z**5 - 10 * z**3 + 15 * z
    he7 = z**7 - 21 * z**5 + 105 * z**3 - 105 * z
    phi = math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    tail = _normal_sf(z) + phi * (g2 / 24 * he3 + g4 / 720 * he5 + g2**2 / 1152 * he7)
    return min(max(tail, 0.0), 0.5)


def wilcoxon_signed_rank(scores_a, scores_b, alpha=0.05) -> WilcoxonOutcome:
    """Two-sided Wilcoxon signed-rank test on paired scores.

    Differences ``a - b`` equal to zero are dropped; tied magnitudes share
    their average rank. ``r_plus`` sums the ranks where ``a`` is larger, so
    it belongs to the left-hand method. The p-value comes from the
    continuity-corrected normal approximation with Edgeworth corrections,
    whose variance already accounts for ties.
    """
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score vectors must be 1-D and of equal length")
    diff = a - b
    diff = diff[diff != 0]
    n = diff.shape[0]
    if n == 0:
        return WilcoxonOutcome(0.0, 0.0, 1.0, 0, alpha)
    ranks = rankdata(np.abs(diff))
    r_plus = float(ranks[diff > 0].sum())
    r_minus = float(ranks[diff < 0].sum())
    p = min(1.0, 2.0 * _signed_rank_tail(r_plus, ranks))
    return WilcoxonOutcome(r_plus, r_minus, p, n, alpha)


def friedman(scores, alpha=0.05, higher_is_better=True) -> FriedmanOutcome:
    """Friedman rank test over an ``(n datasets, k algorithms)`` score table.

    Within each row the best score gets rank 1; ties share the average rank.
    Pass ``higher_is_better=False`` for min-optimal scores such as VI.
    """
    S = np.asarray(scores, dtype=float)
    if S.ndim != 2:
        raise ValueError("scores must be a 2-D (datasets x algorithms) table")
    n, k = S.shape
    if k < 2 or n < 2:
        raise ValueError(f"need at least 2 datasets and 2 algorithms, got {n}x{k}")
    keyed = -S if higher_is_better else S
    ranks = np.vstack([rankdata(row) for row in keyed])
    avg = ranks.mean(axis=0)
    stat = 12.0 * n / (k * (k + 1)) * float(((avg - (k + 1) / 2.0) ** 2).sum())
    if stat <= 1e-12:
        return FriedmanOutcome(avg, 0.0, 1.0, k, n, alpha)
    return FriedmanOutcome(avg, stat, chi2_sf(stat, k - 1), k, n, alpha)
