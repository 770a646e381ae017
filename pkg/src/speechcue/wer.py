"""Word Error Rate via Levenshtein alignment with unit costs.

WER = (substitutions + deletions + insertions) / reference length.  Among
minimal-cost alignments the backtrace prefers substitution, then deletion,
then insertion, so the error breakdown is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class WerBreakdown:
    substitutions: int
    deletions: int
    insertions: int
    ref_len: int

    @property
    def edits(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        return self.edits / self.ref_len


def wer(ref_tokens: Sequence[str], hyp_tokens: Sequence[str]) -> WerBreakdown:
    """Align hypothesis against reference and count S/D/I.

    Raises ValueError on an empty reference (the rate is undefined).
    """
    ref = list(ref_tokens)
    hyp = list(hyp_tokens)
    if not ref:
        raise ValueError("wer: empty reference")

    n, m = len(ref), len(hyp)
    dist = np.zeros((n + 1, m + 1), dtype=np.int32)
    dist[:, 0] = np.arange(n + 1)
    dist[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = dist[i - 1, j - 1] + (0 if ref[i - 1] == hyp[j - 1] else 1)
            dele = dist[i - 1, j] + 1
            ins = dist[i, j - 1] + 1
            dist[i, j] = min(sub, dele, ins)

    # Backtrace with sub > del > ins preference on cost ties.
    i, j = n, m
    s = d = ins_count = 0
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            match = ref[i - 1] == hyp[j - 1]
            diag = dist[i - 1, j - 1] + (0 if match else 1)
            if diag == dist[i, j]:
                if not match:
                    s += 1
                i -= 1
                j -= 1
                continue
        if i > 0 and dist[i - 1, j] + 1 == dist[i, j]:
            d += 1
            i -= 1
            continue
        ins_count += 1
        j -= 1
    return WerBreakdown(substitutions=s, deletions=d, insertions=ins_count, ref_len=n)


def mean_wer(pairs: Sequence[tuple[Sequence[str], Sequence[str]]], pooled: bool = False) -> float:
    """Mean WER over (ref, hyp) pairs.

    Default is the per-sample mean of individual WERs; ``pooled=True``
    instead divides total edits by total reference length.
    """
    if not pairs:
        raise ValueError("mean_wer: no pairs")
    breakdowns = [wer(r, h) for r, h in pairs]
    if pooled:
        total_edits = sum(b.edits for b in breakdowns)
        total_ref = sum(b.ref_len for b in breakdowns)
        return total_edits / total_ref
    return float(np.mean([b.wer for b in breakdowns]))
