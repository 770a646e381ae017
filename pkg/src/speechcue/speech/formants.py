"""First and second formant statistics from LPC root analysis.

Per voiced frame: 0.97 pre-emphasis, Hamming window, LPC of order
2 + sample_rate/1000, polynomial roots.  Roots with bandwidth under
400 Hz become formant candidates; F1 is the lowest candidate in
[90, 1000] Hz and F2 the next candidate above F1 inside [600, 3200] Hz.
Means and population stds are taken over frames where both were found.
"""

from __future__ import annotations

import numpy as np

from .audio import AudioBuffer, DspConfig, frame_signal
from .lpc import lpc_coefficients, preemphasize
from .pitch import F0Contour
from ..stats import pop_std

F1_RANGE = (90.0, 1000.0)
F2_RANGE = (600.0, 3200.0)
MAX_BANDWIDTH_HZ = 400.0


def formant_stats(
    audio: AudioBuffer,
    contour: F0Contour,
    config: DspConfig = DspConfig(),
    diagnostics: list[str] | None = None,
) -> tuple[float, float, float, float]:
    """(f1_mean, f1_std, f2_mean, f2_std); zeros with a diagnostic when no
    voiced frame yields both formants."""
    sr = audio.sample_rate
    frames = frame_signal(audio.samples, config.frame_len(sr), config.hop_len(sr))
    order = 2 + sr // 1000
    window = np.hamming(frames.shape[1])

    f1_list: list[float] = []
    f2_list: list[float] = []
    for i in np.flatnonzero(contour.voiced):
        frame = preemphasize(frames[i]) * window
        if not np.any(frame):
            continue
        coeffs = lpc_coefficients(frame, order)
        pair = _formant_pair(coeffs, sr)
        if pair is not None:
            f1_list.append(pair[0])
            f2_list.append(pair[1])
    if not f1_list:
        if diagnostics is not None:
            diagnostics.append("formant_stats: no voiced frame with both formants; zeros")
        return (0.0, 0.0, 0.0, 0.0)
    return (
        float(np.mean(f1_list)),
        pop_std(f1_list),
        float(np.mean(f2_list)),
        pop_std(f2_list),
    )


def _formant_pair(coeffs: np.ndarray, sr: int) -> tuple[float, float] | None:
    roots = np.roots(coeffs)
    roots = roots[np.imag(roots) > 0]
    candidates = []
    for r in roots:
        mag = abs(r)
        if mag <= 0.0 or mag >= 1.0:
            continue
        freq = float(np.angle(r) * sr / (2.0 * np.pi))
        bandwidth = float(-sr / np.pi * np.log(mag))
        if bandwidth < MAX_BANDWIDTH_HZ and freq > 0:
            candidates.append(freq)
    candidates.sort()
    f1 = next((f for f in candidates if F1_RANGE[0] <= f <= F1_RANGE[1]), None)
    if f1 is None:
        return None
    f2 = next((f for f in candidates if f > f1 and F2_RANGE[0] <= f <= F2_RANGE[1]), None)
    if f2 is None:
        return None
    return f1, f2
