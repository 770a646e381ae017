"""Lexical diversity measures: TTR, MSTTR, MATTR and MTLD.

MTLD is the bidirectional factor-count measure: walking the sequence, a
factor completes whenever the running type-token ratio drops to the
threshold (default 0.72); the leftover segment contributes the partial
factor (1 - TTR) / (1 - threshold).  The reported value is the mean of
the forward and backward passes.  A sequence whose running TTR never
leaves 1.0 accrues no factor mass at all; by documented convention that
degenerate case evaluates to len(tokens) / (1 - threshold).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

DEFAULT_WINDOW = 50
DEFAULT_MTLD_THRESHOLD = 0.72


@dataclass(frozen=True)
class DiversityScores:
    ttr: float
    msttr: float
    mattr: float
    mtld: float


def ttr(tokens: Sequence[str]) -> float:
    if not tokens:
        raise ValueError("ttr: empty token sequence")
    return len(set(tokens)) / len(tokens)


def msttr(tokens: Sequence[str], window: int = DEFAULT_WINDOW) -> float:
    """Mean TTR over consecutive disjoint windows, trailing partial window
    dropped; falls back to plain TTR when no full window fits."""
    if not tokens:
        raise ValueError("msttr: empty token sequence")
    if window <= 0:
        raise ValueError("msttr: window must be positive")
    n_full = len(tokens) // window
    if n_full == 0:
        return ttr(tokens)
    ratios = [ttr(tokens[i * window : (i + 1) * window]) for i in range(n_full)]
    return sum(ratios) / n_full


def mattr(tokens: Sequence[str], window: int = DEFAULT_WINDOW) -> float:
    """Mean TTR over all sliding windows; equals TTR when the sequence is
    shorter than the window."""
    if not tokens:
        raise ValueError("mattr: empty token sequence")
    if window <= 0:
        raise ValueError("mattr: window must be positive")
    n = len(tokens)
    if n < window:
        return ttr(tokens)
    total = 0.0
    for i in range(n - window + 1):
        total += len(set(tokens[i : i + window])) / window
    return total / (n - window + 1)


def mtld(tokens: Sequence[str], threshold: float = DEFAULT_MTLD_THRESHOLD) -> float:
    if not tokens:
        raise ValueError("mtld: empty token sequence")
    fwd = _mtld_one_direction(list(tokens), threshold)
    bwd = _mtld_one_direction(list(reversed(tokens)), threshold)
    return 0.5 * (fwd + bwd)


def _mtld_one_direction(tokens: list[str], threshold: float) -> float:
    factors = 0.0
    types: set[str] = set()
    token_count = 0
    current_ttr = 1.0
    for tok in tokens:
        token_count += 1
        types.add(tok)
        current_ttr = len(types) / token_count
        if current_ttr <= threshold:
            factors += 1.0
            types.clear()
            token_count = 0
            current_ttr = 1.0
    factors += (1.0 - current_ttr) / (1.0 - threshold)
    if factors == 0.0:
        return len(tokens) / (1.0 - threshold)
    return len(tokens) / factors


def lexical_diversity(
    tokens: Sequence[str],
    window: int = DEFAULT_WINDOW,
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD,
) -> DiversityScores:
    """All four diversity scores for one token sequence."""
    if not tokens:
        raise ValueError("lexical_diversity: empty token sequence")
    return DiversityScores(
        ttr=ttr(tokens),
        msttr=msttr(tokens, window),
        mattr=mattr(tokens, window),
        mtld=mtld(tokens, mtld_threshold),
    )
