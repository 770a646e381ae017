"""Audio buffers, WAV loading, framing and energy.

Audio is mono float64 in [-1, 1]; integer PCM is scaled on load and
stereo is downmixed by averaging.  Analysis uses 40 ms frames with a
10 ms hop unless configured otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

ENERGY_EPS = 1e-10


@dataclass(frozen=True)
class AudioBuffer:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "samples", samples)
        if self.sample_rate < 8000:
            raise ValueError(f"sample rate {self.sample_rate} below the 8 kHz minimum")
        if not np.all(np.isfinite(samples)):
            raise ValueError("audio contains non-finite samples")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class DspConfig:
    frame_s: float = 0.040
    hop_s: float = 0.010
    f0_min: float = 60.0
    f0_max: float = 400.0
    voicing_threshold: float = 0.45   # normalized autocorrelation clarity
    min_pause_s: float = 0.100
    silence_floor_db: float = -80.0   # absolute lower bound for the adaptive floor
    glottal_chunk_s: float = 0.200

    def frame_len(self, sr: int) -> int:
        return int(round(self.frame_s * sr))

    def hop_len(self, sr: int) -> int:
        return int(round(self.hop_s * sr))


def read_wav(path) -> AudioBuffer:
    """PCM (16/32-bit int) or float WAV; stereo averaged to mono."""
    sr, data = wavfile.read(path)
    data = np.asarray(data)
    if data.ndim == 2:
        data = data.mean(axis=1)
    if np.issubdtype(data.dtype, np.integer):
        scale = float(np.iinfo(data.dtype).max) + 1.0
        data = data.astype(np.float64) / scale
    else:
        data = data.astype(np.float64)
    return AudioBuffer(samples=data, sample_rate=int(sr))


def write_wav(path, audio: AudioBuffer) -> None:
    clipped = np.clip(audio.samples, -1.0, 1.0)
    wavfile.write(path, audio.sample_rate, (clipped * 32767.0).astype(np.int16))


def frame_signal(samples: np.ndarray, frame_len: int, hop_len: int) -> np.ndarray:
    """Frames as a (n_frames, frame_len) view-copy; requires at least one
    full frame."""
    if len(samples) < frame_len:
        raise ValueError(f"audio shorter than one frame ({len(samples)} < {frame_len})")
    n = 1 + (len(samples) - frame_len) // hop_len
    idx = np.arange(frame_len)[None, :] + hop_len * np.arange(n)[:, None]
    return samples[idx]


def frame_energies_db(samples: np.ndarray, frame_len: int, hop_len: int) -> np.ndarray:
    frames = frame_signal(samples, frame_len, hop_len)
    return 10.0 * np.log10(np.mean(frames**2, axis=1) + ENERGY_EPS)


def adaptive_floor_db(energies_db: np.ndarray, absolute_floor_db: float = -80.0) -> float:
    """Silence floor: 10th-percentile energy + 3 dB, clamped.

    The clamp keeps the floor meaningful when the recording has no real
    silence (uniform energy: the raw rule would sit above every frame) or
    is all silence (the absolute bound keeps near-zero frames below it):
    never above max - 10 dB and never below the absolute floor.
    """
    p10 = float(np.percentile(energies_db, 10.0))
    top = float(np.max(energies_db))
    return max(absolute_floor_db, min(p10 + 3.0, top - 10.0))
