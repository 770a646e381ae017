"""Fundamental frequency tracking by normalized autocorrelation.

Per frame, the normalized cross-correlation r(tau) between the frame's
head x[0:N-tau] and its shifted copy x[tau:N] is evaluated over the lag
interval [sr/f0_max, sr/f0_min] (FFT autocorrelation plus cumulative
energy terms).  Among local peaks reaching 90% of the global best, the
smallest lag wins, which suppresses subharmonic octave errors on exactly
periodic signals.  A frame is voiced iff that peak's clarity reaches the
threshold (default 0.45) AND the frame's energy sits above the adaptive
silence floor; the peak lag is refined by parabolic interpolation before
conversion to Hz.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer, DspConfig, adaptive_floor_db, frame_energies_db, frame_signal

_PEAK_KEEP_FRACTION = 0.9


@dataclass
class F0Contour:
    times: np.ndarray       # frame start times, seconds
    f0: np.ndarray          # Hz; 0 where unvoiced
    voiced: np.ndarray      # bool
    energy_db: np.ndarray   # per-frame log energy
    hop_s: float
    frame_s: float

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.f0) == len(self.voiced) == len(self.energy_db) == n):
            raise ValueError("contour arrays must have equal length")

    def voiced_f0(self) -> np.ndarray:
        return self.f0[self.voiced]


def estimate_f0(audio: AudioBuffer, config: DspConfig = DspConfig()) -> F0Contour:
    """Frame-level F0 contour; raises ValueError for audio shorter than
    one frame."""
    sr = audio.sample_rate
    frame_len = config.frame_len(sr)
    hop_len = config.hop_len(sr)
    frames = frame_signal(audio.samples, frame_len, hop_len)
    energies = frame_energies_db(audio.samples, frame_len, hop_len)
    floor = adaptive_floor_db(energies, config.silence_floor_db)

    lag_min = max(2, int(np.floor(sr / config.f0_max)))
    lag_max = min(frame_len - 2, int(np.ceil(sr / config.f0_min)))
    if lag_max <= lag_min:
        raise ValueError("frame too short for the requested f0 range")

    n = frames.shape[0]
    f0 = np.zeros(n)
    voiced = np.zeros(n, dtype=bool)
    for i in range(n):
        if energies[i] <= floor:
            continue
        frame = frames[i] - frames[i].mean()
        vals = _nccf_all_lags(frame, lag_min, lag_max)
        picked = _pick_peak(vals)
        if picked is None:
            continue
        rel, clarity = picked
        if clarity < config.voicing_threshold:
            continue
        refined = _parabolic_refine(vals, rel) + lag_min
        candidate = sr / refined
        if config.f0_min <= candidate <= config.f0_max:
            voiced[i] = True
            f0[i] = candidate
    times = np.arange(n) * (hop_len / sr)
    return F0Contour(
        times=times, f0=f0, voiced=voiced, energy_db=energies,
        hop_s=hop_len / sr, frame_s=frame_len / sr,
    )


def _nccf_all_lags(frame: np.ndarray, lag_min: int, lag_max: int) -> np.ndarray:
    """Normalized cross-correlation for every lag in [lag_min, lag_max]."""
    n = len(frame)
    nfft = 1
    while nfft < 2 * n:
        nfft *= 2
    spectrum = np.fft.rfft(frame, nfft)
    autocorr = np.fft.irfft(spectrum * np.conj(spectrum), nfft)[: lag_max + 1]
    cumulative = np.concatenate([[0.0], np.cumsum(frame * frame)])
    lags = np.arange(lag_min, lag_max + 1)
    head_energy = cumulative[n - lags]
    tail_energy = cumulative[n] - cumulative[lags]
    denom = np.sqrt(head_energy * tail_energy)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(denom > 0.0, autocorr[lags] / denom, 0.0)
    return np.clip(vals, -1.0, 1.0)


def _pick_peak(vals: np.ndarray) -> tuple[int, float] | None:
    """Smallest-lag local peak within 90% of the global best value."""
    if len(vals) < 3:
        return None
    best = float(np.max(vals))
    if best <= 0.0:
        return None
    is_peak = np.zeros(len(vals), dtype=bool)
    is_peak[1:-1] = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    is_peak[0] = vals[0] >= vals[1]
    is_peak[-1] = vals[-1] >= vals[-2]
    keep = is_peak & (vals >= _PEAK_KEEP_FRACTION * best)
    candidates = np.flatnonzero(keep)
    if candidates.size == 0:
        return None
    rel = int(candidates[0])
    return rel, float(vals[rel])


def _parabolic_refine(vals: np.ndarray, rel: int) -> float:
    if rel <= 0 or rel >= len(vals) - 1:
        return float(rel)
    y0, y1, y2 = float(vals[rel - 1]), float(vals[rel]), float(vals[rel + 1])
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(rel)
    delta = 0.5 * (y0 - y2) / denom
    if not -1.0 < delta < 1.0:
        return float(rel)
    return rel + delta
