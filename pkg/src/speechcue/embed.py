"""EMB1 embedding files, dataset binding, and synthetic planted-cue data.

EMB1 layout: bytes 0-3 magic ``EMB1``; bytes 4-7 row count (u32 LE);
bytes 8-11 column count (u32 LE); then rows x cols IEEE-754 float32 LE
values, row-major.  A file is exactly 12 + 4*rows*cols bytes; any
header/payload inconsistency is rejected.

Synthetic datasets draw from a fixed counter-based PRNG (numpy Philox) in
a fixed order, so the same spec reproduces bit-identical data anywhere.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .manifest import LABELS, DatasetManifest

EMB_MAGIC = b"EMB1"
PAPER_DIM = 1024
_MAX_ELEMENTS = 2**28  # 1 GiB of float32 payload


class EmbeddingFormatError(Exception):
    pass


class BadMagicError(EmbeddingFormatError):
    pass


class TruncatedPayloadError(EmbeddingFormatError):
    pass


class DimensionError(EmbeddingFormatError):
    pass


class BindError(Exception):
    """Raised when manifest entries cannot be joined to their artifacts;
    the message lists every offending sample."""


def write_embedding(path: str | Path, matrix: np.ndarray) -> None:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"embedding must be a non-empty 2-D matrix, got shape {arr.shape}")
    if arr.size > _MAX_ELEMENTS:
        raise DimensionError(f"embedding too large: {arr.size} elements")
    if not np.all(np.isfinite(arr)):
        raise ValueError("embedding contains non-finite values")
    data = np.ascontiguousarray(arr, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(EMB_MAGIC)
        fh.write(struct.pack("<II", arr.shape[0], arr.shape[1]))
        fh.write(data.tobytes())


def read_embedding(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 12:
        raise TruncatedPayloadError(f"{path}: file shorter than the 12-byte header")
    if raw[:4] != EMB_MAGIC:
        raise BadMagicError(f"{path}: bad magic {raw[:4]!r}")
    rows, cols = struct.unpack("<II", raw[4:12])
    if rows < 1 or cols < 1 or rows * cols > _MAX_ELEMENTS:
        raise DimensionError(f"{path}: invalid dimensions {rows} x {cols}")
    expected = 12 + 4 * rows * cols
    if len(raw) != expected:
        raise TruncatedPayloadError(
            f"{path}: payload size mismatch (expected {expected} bytes, found {len(raw)})"
        )
    return np.frombuffer(raw[12:], dtype="<f4").reshape(rows, cols).copy()


# ---------------------------------------------------------------------------
# dataset binding

@dataclass(frozen=True)
class Sample:
    """One classification sample: embedding matrix + knowledge vector."""

    sample_id: str
    embedding: np.ndarray  # n x d, float64
    knowledge: np.ndarray  # (m,), float64
    label: int             # index into manifest.LABELS
    split: str             # train | test


@dataclass
class BoundDataset:
    samples: list[Sample]
    warnings: list[str] = field(default_factory=list)

    def split(self, name: str) -> list[Sample]:
        return [s for s in self.samples if s.split == name]


def read_feature_csv(path: str | Path) -> tuple[list[str], dict[str, np.ndarray]]:
    """Feature CSV: header ``sample_id,<name...>``; returns (names, rows)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "sample_id":
            raise ValueError(f"{path}: expected a header starting with 'sample_id'")
        names = header[1:]
        rows: dict[str, np.ndarray] = {}
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: row width {len(row)} != header width {len(header)}")
            rows[row[0]] = np.array([float(v) for v in row[1:]], dtype=float)
    return names, rows


def write_feature_csv(path: str | Path, names, rows: dict[str, np.ndarray]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", *names])
        for sample_id in sorted(rows):
            writer.writerow([sample_id] + [repr(float(v)) for v in rows[sample_id]])


def bind_dataset(
    manifest: DatasetManifest, condition: str, feature_csv: str | Path
) -> BoundDataset:
    """Join manifest entries of one condition with embeddings and features.

    Every entry must have an embedding_path and a feature row; all missing
    pairs are reported together.  A non-paper embedding width is tolerated
    with a warning.
    """
    entries = manifest.for_condition(condition)
    if not entries:
        raise BindError(f"no manifest entries for condition {condition!r}")
    _, feature_rows = read_feature_csv(feature_csv)

    missing: list[str] = []
    for e in entries:
        if e.embedding_path is None:
            missing.append(f"{e.sample_id}: no embedding_path")
        if e.sample_id not in feature_rows:
            missing.append(f"{e.sample_id}: no feature row")
    if missing:
        raise BindError("bind_dataset: " + "; ".join(missing))

    dataset = BoundDataset(samples=[])
    for e in entries:
        emb = read_embedding(e.embedding_path).astype(np.float64)
        if emb.shape[1] != PAPER_DIM:
            dataset.warnings.append(
                f"{e.sample_id}: embedding width {emb.shape[1]} != {PAPER_DIM}"
            )
        dataset.samples.append(
            Sample(
                sample_id=e.sample_id,
                embedding=emb,
                knowledge=feature_rows[e.sample_id],
                label=e.label_index(),
                split=e.split,
            )
        )
    return dataset


# ---------------------------------------------------------------------------
# synthetic planted-cue data

@dataclass(frozen=True)
class SyntheticSpec:
    """Class-conditional Gaussian knowledge vectors with planted mean
    shifts, plus embeddings carrying a rank-1 component tied to the
    planted features.

    Non-planted features share a common factor (``noise_correlation``),
    mirroring the strong collinearity of real knowledge features
    (readability indices, POS ratios and counts are highly correlated);
    planted features carry independent noise around their class means.
    """

    train_per_class: int
    test_per_class: int
    m: int = 35
    d: int = PAPER_DIM
    n_rows: tuple[int, int] = (4, 8)
    planted: tuple[int, ...] = (4, 11, 12)
    effect_size: float = 2.0
    noise_scale: float = 1.0
    noise_correlation: float = 0.9
    emb_noise_scale: float = 1.0
    coupling: float = 4.0
    seed: int = 0

    def validate(self) -> None:
        if self.train_per_class < 1 or self.test_per_class < 0:
            raise ValueError("sample counts must be positive")
        if self.m < 1 or self.d < 1:
            raise ValueError("dimensions must be positive")
        if not self.planted or any(not (0 <= j < self.m) for j in self.planted):
            raise ValueError(f"planted indices must lie in [0, {self.m})")
        if self.effect_size < 0:
            raise ValueError("effect size must be non-negative")
        if not 0.0 <= self.noise_correlation < 1.0:
            raise ValueError("noise_correlation must lie in [0, 1)")
        if self.n_rows[0] < 1 or self.n_rows[1] < self.n_rows[0]:
            raise ValueError("n_rows must be a non-empty inclusive range")


@dataclass
class SyntheticDataset:
    train: list[Sample]
    test: list[Sample]
    truth: dict


def generate_synthetic(spec: SyntheticSpec) -> SyntheticDataset:
    """Build a deterministic planted-cue dataset.

    Draw order is fixed: first one unit direction per planted feature,
    then per split (train, test), per class (AD, HC), per sample: the
    shared noise factor, the knowledge vector, the row count, the
    embedding noise.  Class AD gets +effect/2 on planted features; HC
    gets -effect/2.  Each embedding row is shifted by
    coupling * sum_j knowledge[j] * u_j over planted j, so embeddings and
    planted features are correlated with the class sign.
    """
    spec.validate()
    rng = np.random.Generator(np.random.Philox(spec.seed))
    directions = rng.normal(size=(len(spec.planted), spec.d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    planted = list(spec.planted)
    unplanted = [j for j in range(spec.m) if j not in spec.planted]
    rho = spec.noise_correlation

    def make_samples(split: str, per_class: int) -> list[Sample]:
        samples: list[Sample] = []
        for label, sign in ((0, +1.0), (1, -1.0)):
            for k in range(per_class):
                shared = rng.normal()
                kno = rng.normal(0.0, 1.0, size=spec.m)
                kno[unplanted] = rho * shared + math.sqrt(1.0 - rho * rho) * kno[unplanted]
                kno *= spec.noise_scale
                kno[planted] += sign * spec.effect_size / 2.0
                n = int(rng.integers(spec.n_rows[0], spec.n_rows[1] + 1))
                emb = rng.normal(0.0, spec.emb_noise_scale, size=(n, spec.d))
                shift = spec.coupling * (kno[planted] @ directions)
                emb += shift
                samples.append(
                    Sample(
                        sample_id=f"syn-{split}-{LABELS[label].lower()}-{k:03d}",
                        embedding=emb,
                        knowledge=kno,
                        label=label,
                        split=split,
                    )
                )
        return samples

    train = make_samples("train", spec.train_per_class)
    test = make_samples("test", spec.test_per_class)
    truth = {
        "planted_indices": list(spec.planted),
        "effect_size": spec.effect_size,
        "noise_scale": spec.noise_scale,
        "noise_correlation": spec.noise_correlation,
        "emb_noise_scale": spec.emb_noise_scale,
        "coupling": spec.coupling,
        "seed": spec.seed,
        "m": spec.m,
        "d": spec.d,
        "labels": list(LABELS),
    }
    return SyntheticDataset(train=train, test=test, truth=truth)
