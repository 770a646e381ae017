"""Knowledge-based speech features and the DSP stack behind them."""

from .audio import AudioBuffer, DspConfig, adaptive_floor_db, frame_energies_db, read_wav, write_wav
from .features import SPEECH_FEATURE_NAMES, SpeechFeatureVector, extract_speech_features
from .formants import formant_stats
from .glottal import detect_gci, estimate_glottal_flow, glottal_descriptors
from .phonation import phonation_features
from .pitch import F0Contour, estimate_f0
from .prosody import prosody_features
from .segments import SegmentKind, Span, segment_vup, total_duration

__all__ = [
    "SPEECH_FEATURE_NAMES",
    "AudioBuffer",
    "DspConfig",
    "F0Contour",
    "SegmentKind",
    "Span",
    "SpeechFeatureVector",
    "adaptive_floor_db",
    "detect_gci",
    "estimate_f0",
    "estimate_glottal_flow",
    "extract_speech_features",
    "formant_stats",
    "frame_energies_db",
    "glottal_descriptors",
    "phonation_features",
    "prosody_features",
    "read_wav",
    "segment_vup",
    "total_duration",
    "write_wav",
]
