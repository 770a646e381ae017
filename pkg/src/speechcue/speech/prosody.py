"""Prosody features: F0 statistics, voiced-energy statistics, segment
counts, duration statistics and duration ratios (35 values).

Order: F0 mean/std/max/min/skew/kurt over voiced frames; energy contour
mean/std/skew/kurt over voiced frames; voiced segments per second; then
mean/std/skew/kurt/max/min of the voiced, unvoiced and pause duration
lists; finally PVU, PU, UVU, VVU, VP, UP.  Zero denominators and empty
lists fall back to 0 with a diagnostic.
"""

from __future__ import annotations

import numpy as np

from .pitch import F0Contour
from .segments import SegmentKind, Span, total_duration
from ..stats import excess_kurtosis, pop_std, six_stats, skewness

PROSODY_NAMES = (
    "f0_mean", "f0_std", "f0_max", "f0_min", "f0_skew", "f0_kurt",
    "energy_mean", "energy_std", "energy_skew", "energy_kurt",
    "nvss",
    "voiced_dur_mean", "voiced_dur_std", "voiced_dur_skew",
    "voiced_dur_kurt", "voiced_dur_max", "voiced_dur_min",
    "unvoiced_dur_mean", "unvoiced_dur_std", "unvoiced_dur_skew",
    "unvoiced_dur_kurt", "unvoiced_dur_max", "unvoiced_dur_min",
    "pause_dur_mean", "pause_dur_std", "pause_dur_skew",
    "pause_dur_kurt", "pause_dur_max", "pause_dur_min",
    "pvu", "pu", "uvu", "vvu", "vp", "up",
)


def prosody_features(
    contour: F0Contour,
    energy_db: np.ndarray,
    segments: list[Span],
    diagnostics: list[str] | None = None,
) -> tuple[float, ...]:
    if not segments:
        raise ValueError("prosody_features: empty segment list")

    def note(msg: str) -> None:
        if diagnostics is not None:
            diagnostics.append(msg)

    voiced_f0 = contour.f0[contour.voiced]
    if voiced_f0.size:
        f0_stats = (
            float(np.mean(voiced_f0)), pop_std(voiced_f0),
            float(np.max(voiced_f0)), float(np.min(voiced_f0)),
            skewness(voiced_f0), excess_kurtosis(voiced_f0),
        )
    else:
        note("prosody_features: no voiced frames; F0 stats zero")
        f0_stats = (0.0,) * 6

    voiced_energy = np.asarray(energy_db)[contour.voiced]
    if voiced_energy.size:
        energy_stats = (
            float(np.mean(voiced_energy)), pop_std(voiced_energy),
            skewness(voiced_energy), excess_kurtosis(voiced_energy),
        )
    else:
        note("prosody_features: no voiced frames; energy stats zero")
        energy_stats = (0.0,) * 4

    total_s = float(sum(s.duration_s for s in segments))
    n_voiced_spans = sum(1 for s in segments if s.kind is SegmentKind.VOICED)
    nvss = n_voiced_spans / total_s if total_s > 0 else 0.0

    duration_stats: list[float] = []
    for kind in (SegmentKind.VOICED, SegmentKind.UNVOICED, SegmentKind.PAUSE):
        durations = [s.duration_s for s in segments if s.kind is kind]
        if not durations:
            note(f"prosody_features: no {kind.value} spans; duration stats zero")
        mean, std, skew, kurt, dmax, dmin = six_stats(durations)
        duration_stats.extend((mean, std, skew, kurt, dmax, dmin))

    v = total_duration(segments, SegmentKind.VOICED)
    u = total_duration(segments, SegmentKind.UNVOICED)
    p = total_duration(segments, SegmentKind.PAUSE)

    def ratio(num: float, denom: float, name: str) -> float:
        if denom <= 0.0:
            note(f"prosody_features: zero denominator for {name}; 0")
            return 0.0
        return num / denom

    ratios = (
        ratio(p, v + u, "pvu"),
        ratio(p, u, "pu"),
        ratio(u, v + u, "uvu"),
        ratio(v, v + u, "vvu"),
        ratio(v, p, "vp"),
        ratio(u, p, "up"),
    )
    return f0_stats + energy_stats + (nvss,) + tuple(duration_stats) + ratios
