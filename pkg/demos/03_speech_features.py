"""The 60 knowledge-based speech features on a synthetic utterance.

We synthesize a voice-like signal (glottal pulse train through a single
resonance) with a pause in the middle, then walk the DSP stack: pitch
contour, voiced/unvoiced/pause segmentation, glottal closure instants,
and the assembled feature vector.
"""

import numpy as np
from scipy.signal import lfilter

from speechcue.speech import (
    AudioBuffer,
    detect_gci,
    estimate_f0,
    extract_speech_features,
    segment_vup,
)

SR = 16000


def pulse_train(period_s, dur_s, open_quotient=0.6):
    out = np.zeros(int(dur_s * SR))
    t = 0.0
    open_len = int(round(open_quotient * period_s * SR))
    while True:
        start = int(round(t * SR))
        if start + open_len >= len(out):
            break
        phase = np.arange(open_len) / open_len
        out[start:start + open_len] += np.cos(np.pi * phase)
        t += period_s
    return out


def resonator(freq, bw):
    r = np.exp(-np.pi * bw / SR)
    theta = 2 * np.pi * freq / SR
    return [1.0], [1.0, -2 * r * np.cos(theta), r * r]


b1, a1 = resonator(600.0, 120.0)
b2, a2 = resonator(1700.0, 160.0)
voiced = lfilter(b2, a2, lfilter(b1, a1, pulse_train(1 / 125.0, 1.2)))
voiced = 0.3 * voiced / np.max(np.abs(voiced))
signal = np.concatenate([voiced, np.zeros(int(0.5 * SR)), voiced])
audio = AudioBuffer(samples=signal, sample_rate=SR)

contour = estimate_f0(audio)
print(f"voiced frames: {int(contour.voiced.sum())}/{len(contour.voiced)}, "
      f"mean F0 {contour.voiced_f0().mean():.1f} Hz")

spans = segment_vup(audio, contour)
for span in spans:
    print(f"  {span.kind.value:9s} {span.start_s:.2f}-{span.end_s:.2f} s")

gci = detect_gci(audio, contour)
intervals = np.diff(gci) * 1000
intervals = intervals[intervals < 12]
print(f"{len(gci)} glottal closure instants, median interval "
      f"{np.median(intervals):.2f} ms (planted 8.00)")

vector = extract_speech_features(audio)
named = vector.as_dict()
for key in ("f1_mean", "f2_mean", "oq_average_mean", "naq_average_mean",
            "jitter_mean", "shimmer_mean", "f0_mean", "nvss", "pvu", "vvu"):
    print(f"  {key:22s} {named[key]:10.4f}")
print("diagnostics:", vector.diagnostics or "none")
