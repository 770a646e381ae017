"""Phonation features: cycle-to-cycle perturbation plus energy and DF0.

Periods come from consecutive GCI intervals (intervals longer than 1.5
times the longest plausible pitch period are treated as gaps and skipped
so pauses never count as cycles).  Jitter and shimmer are the relative
mean absolute first differences of period and per-cycle peak amplitude;
PPQ and APQ are their 5-point perturbation quotients.  All four are
scaled by 100.  logE averages the per-frame log energy over voiced
frames; DF0 is the signed first difference of F0 within contiguous
voiced runs.
"""

from __future__ import annotations

import numpy as np

from .audio import AudioBuffer, DspConfig
from .pitch import F0Contour
from ..stats import pop_std

PHONATION_NAMES = (
    "jitter_mean", "shimmer_mean", "apq_mean", "ppq_mean", "loge_mean",
    "df0_mean", "df0_std",
)

_MIN_PERIODS = 6


def phonation_features(
    audio: AudioBuffer,
    contour: F0Contour,
    gci_times: np.ndarray,
    config: DspConfig = DspConfig(),
    diagnostics: list[str] | None = None,
) -> tuple[float, float, float, float, float, float, float]:
    sr = audio.sample_rate
    periods, cycle_bounds = _periods_from_gci(gci_times, config)

    if len(periods) < _MIN_PERIODS:
        if diagnostics is not None:
            diagnostics.append(
                f"phonation_features: {len(periods)} periods < {_MIN_PERIODS}; perturbation zeros"
            )
        jitter = shimmer = apq = ppq = 0.0
    else:
        mean_t = float(np.mean(periods))
        jitter = 100.0 * float(np.mean(np.abs(np.diff(periods)))) / mean_t
        ppq = 100.0 * _perturbation_quotient(periods, 5) / mean_t
        amplitudes = np.array(
            [float(np.max(np.abs(audio.samples[int(a * sr) : int(b * sr)]) , initial=0.0))
             for a, b in cycle_bounds]
        )
        mean_a = float(np.mean(amplitudes))
        if mean_a > 0.0:
            shimmer = 100.0 * float(np.mean(np.abs(np.diff(amplitudes)))) / mean_a
            apq = 100.0 * _perturbation_quotient(amplitudes, 5) / mean_a
        else:
            shimmer = apq = 0.0

    voiced_energy = contour.energy_db[contour.voiced]
    if voiced_energy.size:
        loge = float(np.mean(voiced_energy))
    else:
        loge = 0.0
        if diagnostics is not None:
            diagnostics.append("phonation_features: no voiced frames; logE 0")

    df0 = _df0(contour)
    if df0.size:
        df0_mean, df0_std = float(np.mean(df0)), pop_std(df0)
    else:
        df0_mean = df0_std = 0.0
        if diagnostics is not None:
            diagnostics.append("phonation_features: no consecutive voiced frames; DF0 zeros")
    return (jitter, shimmer, apq, ppq, loge, df0_mean, df0_std)


def _periods_from_gci(
    gci_times: np.ndarray, config: DspConfig
) -> tuple[np.ndarray, list[tuple[float, float]]]:
    gci = np.asarray(gci_times, dtype=float)
    if len(gci) < 2:
        return np.array([]), []
    max_period = 1.5 / config.f0_min
    periods = []
    bounds = []
    for a, b in zip(gci[:-1], gci[1:]):
        if 0.0 < b - a <= max_period:
            periods.append(b - a)
            bounds.append((a, b))
    return np.asarray(periods), bounds


def _perturbation_quotient(values: np.ndarray, points: int) -> float:
    """Mean absolute deviation of each value from its centered
    ``points``-wide moving average (valid windows only)."""
    half = points // 2
    if len(values) < points:
        return 0.0
    deviations = [
        abs(values[i] - float(np.mean(values[i - half : i + half + 1])))
        for i in range(half, len(values) - half)
    ]
    return float(np.mean(deviations))


def _df0(contour: F0Contour) -> np.ndarray:
    diffs = []
    f0 = contour.f0
    voiced = contour.voiced
    for i in range(1, len(f0)):
        if voiced[i] and voiced[i - 1]:
            diffs.append(f0[i] - f0[i - 1])
    return np.asarray(diffs)
