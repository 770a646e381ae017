"""EMB1 writer (wire format shared with the analysis toolkit).

Layout: bytes 0-3 magic ``EMB1``; bytes 4-7 rows (u32 LE); bytes 8-11
cols (u32 LE); then rows x cols float32 LE values, row-major.  A file is
exactly 12 + 4*rows*cols bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"


def write_emb1(path: str | Path, matrix: np.ndarray) -> None:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"EMB1 needs a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("EMB1 payload must be finite")
    data = np.ascontiguousarray(arr, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", arr.shape[0], arr.shape[1]))
        fh.write(data.tobytes())
