"""Shared descriptive and rank statistics.

Conventions used throughout the toolkit: population standard deviation,
excess kurtosis (normal distribution -> 0), and skewness/kurtosis of a
constant sequence defined as 0 so degenerate inputs never produce NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def pop_std(values) -> float:
    """Population standard deviation (ddof=0); 0.0 for empty input."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return 0.0
    return float(np.std(x))


def skewness(values) -> float:
    """Population skewness; 0.0 when the std is 0 (constant input)."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return 0.0
    s = np.std(x)
    if s == 0.0:
        return 0.0
    return float(np.mean((x - np.mean(x)) ** 3) / s**3)


def excess_kurtosis(values) -> float:
    """Population excess kurtosis (normal -> 0); 0.0 when std is 0."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return 0.0
    s = np.std(x)
    if s == 0.0:
        return 0.0
    return float(np.mean((x - np.mean(x)) ** 4) / s**4 - 3.0)


def six_stats(values) -> tuple[float, float, float, float, float, float]:
    """(mean, std, skewness, kurtosis, max, min); all 0.0 for empty input."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    return (
        float(np.mean(x)),
        pop_std(x),
        skewness(x),
        excess_kurtosis(x),
        float(np.max(x)),
        float(np.min(x)),
    )


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float            # U statistic for the first group
    z: float            # normal approximation with tie correction
    p_value: float      # two-sided
    all_tied: bool      # every pooled value identical; z and p are degenerate


def mann_whitney_u(a, b) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U via the rank-sum formulation.

    U counts, over all (a_i, b_j) pairs, wins for `a` plus half-credit for
    ties.  The z statistic uses the normal approximation with the standard
    tie correction; when every pooled value is identical the variance is 0
    and the result is flagged via ``all_tied`` with z = 0, p = 1.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = a.size, b.size
    if n1 == 0 or n2 == 0:
        raise ValueError("mann_whitney_u: both groups must be non-empty")
    pooled = np.concatenate([a, b])
    ranks = _rank_with_ties(pooled)
    r1 = float(np.sum(ranks[:n1]))
    u1 = r1 - n1 * (n1 + 1) / 2.0

    n = n1 + n2
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(counts**3 - counts))
    all_tied = bool(counts.size == 1)
    mean_u = n1 * n2 / 2.0
    var_u = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1))) if n > 1 else 0.0
    if var_u <= 0.0:
        return MannWhitneyResult(u=u1, z=0.0, p_value=1.0, all_tied=all_tied)
    z = (u1 - mean_u) / math.sqrt(var_u)
    p = 2.0 * (1.0 - _std_normal_cdf(abs(z)))
    return MannWhitneyResult(u=u1, z=z, p_value=min(1.0, p), all_tied=all_tied)


def cliffs_delta(a, b) -> float:
    """Cliff's delta: P(a > b) - P(a < b) over all pairs, in [-1, 1]."""
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[None, :]
    if a.size == 0 or b.size == 0:
        raise ValueError("cliffs_delta: both groups must be non-empty")
    wins = np.sum(a > b)
    losses = np.sum(a < b)
    return float((wins - losses) / (a.size * b.size))


def _rank_with_ties(x: np.ndarray) -> np.ndarray:
    """Midranks: average rank (1-based) assigned to tied values."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=float)
    sx = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _std_normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
