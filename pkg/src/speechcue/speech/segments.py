"""Voiced / unvoiced / pause segmentation from a pitch contour.

Classification runs on the hop grid (default 10 ms) so span edges are
accurate to one hop even though voicing decisions come from the longer
analysis frames: a hop slice is PAUSE when its own energy falls below the
adaptive silence floor, otherwise VOICED when any analysis frame covering
it is voiced, otherwise UNVOICED.  Same-class runs merge into spans;
pause runs shorter than the minimum pause length are absorbed into the
preceding span (the following one at the start).  The outer boundaries
extend to the true audio extent so spans partition the full timeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .audio import ENERGY_EPS, AudioBuffer, DspConfig, adaptive_floor_db
from .pitch import F0Contour


class SegmentKind(str, Enum):
    VOICED = "VOICED"
    UNVOICED = "UNVOICED"
    PAUSE = "PAUSE"


@dataclass(frozen=True)
class Span:
    kind: SegmentKind
    start_s: float
    end_s: float

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def segment_vup(
    audio: AudioBuffer, contour: F0Contour, config: DspConfig = DspConfig()
) -> list[Span]:
    sr = audio.sample_rate
    hop = config.hop_len(sr)
    frame_hops = max(1, round(config.frame_len(sr) / hop))
    n_hops = max(1, -(-len(audio.samples) // hop))  # ceil
    n_frames = len(contour.voiced)

    hop_energy = np.empty(n_hops)
    for i in range(n_hops):
        chunk = audio.samples[i * hop : min((i + 1) * hop, len(audio.samples))]
        hop_energy[i] = 10.0 * np.log10(float(np.mean(chunk**2)) + ENERGY_EPS)
    floor = adaptive_floor_db(hop_energy, config.silence_floor_db)

    kinds: list[SegmentKind] = []
    for i in range(n_hops):
        if hop_energy[i] <= floor:
            kinds.append(SegmentKind.PAUSE)
            continue
        lo = max(0, min(i, n_frames - 1) - (frame_hops - 1))
        hi = min(i, n_frames - 1)
        if np.any(contour.voiced[lo : hi + 1]):
            kinds.append(SegmentKind.VOICED)
        else:
            kinds.append(SegmentKind.UNVOICED)

    runs = _merge_runs(kinds)
    runs = _absorb_short_pauses(runs, config.hop_s, config.min_pause_s)

    spans: list[Span] = []
    duration = audio.duration_s
    for idx, (kind, start_hop, end_hop) in enumerate(runs):
        start_s = 0.0 if idx == 0 else start_hop * config.hop_s
        end_s = duration if idx == len(runs) - 1 else end_hop * config.hop_s
        if end_s > start_s:
            spans.append(Span(kind=kind, start_s=start_s, end_s=end_s))
    return spans


def _merge_runs(kinds: list[SegmentKind]) -> list[tuple[SegmentKind, int, int]]:
    runs: list[tuple[SegmentKind, int, int]] = []
    start = 0
    for i in range(1, len(kinds) + 1):
        if i == len(kinds) or kinds[i] != kinds[start]:
            runs.append((kinds[start], start, i))
            start = i
    return runs


def _absorb_short_pauses(
    runs: list[tuple[SegmentKind, int, int]], hop_s: float, min_pause_s: float
) -> list[tuple[SegmentKind, int, int]]:
    changed = True
    while changed:
        changed = False
        for i, (kind, start, end) in enumerate(runs):
            if kind is not SegmentKind.PAUSE:
                continue
            if (end - start) * hop_s >= min_pause_s:
                continue
            neighbor = i - 1 if i > 0 else (i + 1 if i + 1 < len(runs) else None)
            if neighbor is None:
                continue  # lone short pause: keep it rather than lose the timeline
            runs[i] = (runs[neighbor][0], start, end)
            runs = _remerge(runs)
            changed = True
            break
    return runs


def _remerge(runs: list[tuple[SegmentKind, int, int]]) -> list[tuple[SegmentKind, int, int]]:
    merged: list[tuple[SegmentKind, int, int]] = []
    for run in runs:
        if merged and merged[-1][0] == run[0] and merged[-1][2] == run[1]:
            merged[-1] = (run[0], merged[-1][1], run[2])
        else:
            merged.append(run)
    return merged


def total_duration(spans: list[Span], kind: SegmentKind) -> float:
    return float(sum(s.duration_s for s in spans if s.kind is kind))
