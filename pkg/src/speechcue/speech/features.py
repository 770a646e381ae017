"""The 60 knowledge-based speech features in canonical index order.

Index map:
  0-3   articulation: F1 mean/std, F2 mean/std
  4-17  glottal: mean and std (interleaved) of GCI-interval variability,
        NAQ average, NAQ variability, OQ average, OQ variability,
        HRF average, HRF variability
  18-24 phonation: jitter, shimmer, APQ, PPQ, logE means; DF0 mean, std
  25-59 prosody: F0 six stats; voiced-energy four stats; NVSS; six
        duration stats each for voiced/unvoiced/pause; PVU PU UVU VVU VP UP
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .audio import AudioBuffer, DspConfig
from .formants import formant_stats
from .glottal import GLOTTAL_DESCRIPTOR_NAMES, detect_gci, glottal_descriptors
from .phonation import PHONATION_NAMES, phonation_features
from .pitch import estimate_f0
from .prosody import PROSODY_NAMES, prosody_features
from .segments import segment_vup

_GLOTTAL_NAMES = tuple(
    f"{name}_{stat}" for name in GLOTTAL_DESCRIPTOR_NAMES for stat in ("mean", "std")
)

SPEECH_FEATURE_NAMES = (
    ("f1_mean", "f1_std", "f2_mean", "f2_std")
    + _GLOTTAL_NAMES
    + PHONATION_NAMES
    + PROSODY_NAMES
)
assert len(SPEECH_FEATURE_NAMES) == 60


@dataclass
class SpeechFeatureVector:
    values: np.ndarray  # shape (60,)
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(SPEECH_FEATURE_NAMES),):
            raise ValueError(f"expected {len(SPEECH_FEATURE_NAMES)} values, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("speech feature vector contains non-finite values")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(SPEECH_FEATURE_NAMES, self.values.tolist()))


def extract_speech_features(
    audio: AudioBuffer, config: DspConfig = DspConfig()
) -> SpeechFeatureVector:
    """Full 60-entry vector; deterministic for identical input."""
    diagnostics: list[str] = []
    contour = estimate_f0(audio, config)
    segments = segment_vup(audio, contour, config)
    formants = formant_stats(audio, contour, config, diagnostics)
    gci = detect_gci(audio, contour, config)
    glottal = glottal_descriptors(audio, gci, config, diagnostics)
    phonation = phonation_features(audio, contour, gci, config, diagnostics)
    prosody = prosody_features(contour, contour.energy_db, segments, diagnostics)
    values = np.array(formants + glottal + phonation + prosody, dtype=float)
    return SpeechFeatureVector(values=values, diagnostics=diagnostics)
