import json
import struct

import numpy as np
import pytest

from speechcue.embed import (
    BadMagicError,
    BindError,
    DimensionError,
    SyntheticSpec,
    TruncatedPayloadError,
    bind_dataset,
    generate_synthetic,
    read_embedding,
    read_feature_csv,
    write_embedding,
    write_feature_csv,
)
from speechcue.manifest import load_manifest


# ---------------------------------------------------------------------------
# EMB1 files

def test_roundtrip_bitwise(tmp_path):
    rng = np.random.Generator(np.random.Philox(0))
    mat = rng.normal(size=(2, 3)).astype(np.float32)
    path = tmp_path / "x.emb"
    write_embedding(path, mat)
    back = read_embedding(path)
    assert back.dtype == np.float32
    assert np.array_equal(back, mat)
    assert path.stat().st_size == 12 + 4 * 2 * 3


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.emb"
    path.write_bytes(b"XXXX" + struct.pack("<II", 1, 1) + b"\x00" * 4)
    with pytest.raises(BadMagicError):
        read_embedding(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "short.emb"
    path.write_bytes(b"EMB1" + struct.pack("<II", 10, 1024) + b"\x00" * 100)
    with pytest.raises(TruncatedPayloadError):
        read_embedding(path)


def test_oversized_payload_rejected(tmp_path):
    path = tmp_path / "long.emb"
    path.write_bytes(b"EMB1" + struct.pack("<II", 1, 1) + b"\x00" * 8)
    with pytest.raises(TruncatedPayloadError):
        read_embedding(path)


def test_dimension_overflow(tmp_path):
    path = tmp_path / "huge.emb"
    path.write_bytes(b"EMB1" + struct.pack("<II", 2**31 - 1, 2**31 - 1))
    with pytest.raises(DimensionError):
        read_embedding(path)


def test_zero_rows_rejected(tmp_path):
    path = tmp_path / "zero.emb"
    path.write_bytes(b"EMB1" + struct.pack("<II", 0, 4))
    with pytest.raises(DimensionError):
        read_embedding(path)


def test_write_rejects_non_finite(tmp_path):
    with pytest.raises(ValueError):
        write_embedding(tmp_path / "nan.emb", np.array([[np.nan, 1.0]]))


def test_write_rejects_1d(tmp_path):
    with pytest.raises(DimensionError):
        write_embedding(tmp_path / "1d.emb", np.ones(4))


# ---------------------------------------------------------------------------
# feature CSV

def test_feature_csv_roundtrip(tmp_path):
    rows = {"s1": np.array([1.5, 2.0]), "s2": np.array([0.25, -1.0])}
    path = tmp_path / "feats.csv"
    write_feature_csv(path, ["a", "b"], rows)
    names, back = read_feature_csv(path)
    assert names == ["a", "b"]
    assert np.array_equal(back["s1"], rows["s1"])
    assert np.array_equal(back["s2"], rows["s2"])


# ---------------------------------------------------------------------------
# bind_dataset

def _make_bound_fixture(tmp_path, n=4, d=1024, missing_feature=False):
    entries = []
    rows = {}
    rng = np.random.Generator(np.random.Philox(1))
    for i in range(n):
        sid = f"s{i}"
        emb_path = tmp_path / f"{sid}.emb"
        write_embedding(emb_path, rng.normal(size=(3, d)).astype(np.float32))
        entries.append({
            "sample_id": sid, "label": "AD" if i % 2 == 0 else "HC",
            "condition": "manual", "split": "train" if i < n - 1 else "test",
            "embedding_path": f"{sid}.emb",
        })
        if not (missing_feature and i == 1):
            rows[sid] = rng.normal(size=5)
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps({"entries": entries}))
    csv_path = tmp_path / "features.csv"
    write_feature_csv(csv_path, [f"f{k}" for k in range(5)], rows)
    return manifest_path, csv_path


def test_bind_consistent_fixture(tmp_path):
    manifest_path, csv_path = _make_bound_fixture(tmp_path)
    bound = bind_dataset(load_manifest(manifest_path), "manual", csv_path)
    assert len(bound.samples) == 4
    assert not bound.warnings
    assert {s.split for s in bound.samples} == {"train", "test"}
    assert bound.samples[0].embedding.dtype == np.float64


def test_bind_missing_feature_row_names_sample(tmp_path):
    manifest_path, csv_path = _make_bound_fixture(tmp_path, missing_feature=True)
    with pytest.raises(BindError, match="s1"):
        bind_dataset(load_manifest(manifest_path), "manual", csv_path)


def test_bind_non_paper_width_warns_but_loads(tmp_path):
    manifest_path, csv_path = _make_bound_fixture(tmp_path, d=64)
    bound = bind_dataset(load_manifest(manifest_path), "manual", csv_path)
    assert len(bound.samples) == 4
    assert len(bound.warnings) == 4


def test_bind_unknown_condition(tmp_path):
    manifest_path, csv_path = _make_bound_fixture(tmp_path)
    with pytest.raises(BindError):
        bind_dataset(load_manifest(manifest_path), "asr:none", csv_path)


# ---------------------------------------------------------------------------
# synthetic generation

def test_synthetic_deterministic():
    spec = SyntheticSpec(train_per_class=5, test_per_class=2, m=12, d=16, seed=7,
                         planted=(0, 3))
    a = generate_synthetic(spec)
    b = generate_synthetic(spec)
    for sa, sb in zip(a.train + a.test, b.train + b.test):
        assert sa.sample_id == sb.sample_id
        assert np.array_equal(sa.embedding, sb.embedding)
        assert np.array_equal(sa.knowledge, sb.knowledge)


def test_synthetic_zero_effect_degenerate():
    spec = SyntheticSpec(train_per_class=300, test_per_class=0, m=8, d=4,
                         planted=(2,), effect_size=0.0, seed=3)
    data = generate_synthetic(spec)
    ad = np.array([s.knowledge[2] for s in data.train if s.label == 0])
    hc = np.array([s.knowledge[2] for s in data.train if s.label == 1])
    # means equal within sampling error (~3 std errors)
    assert abs(ad.mean() - hc.mean()) < 3.0 * np.sqrt(1.0 / 300 + 1.0 / 300)


def test_synthetic_planted_separation_detectable():
    spec = SyntheticSpec(train_per_class=100, test_per_class=0, m=10, d=8,
                         planted=(1, 5, 8), effect_size=2.0, seed=11)
    data = generate_synthetic(spec)
    kno = np.array([s.knowledge for s in data.train])
    labels = np.array([s.label for s in data.train])
    for j in range(10):
        gap = abs(kno[labels == 0, j].mean() - kno[labels == 1, j].mean())
        if j in spec.planted:
            assert gap > 1.4   # planted: direct mean-difference test fires
        else:
            assert gap < 0.75  # unplanted: noise only


def test_synthetic_embeddings_correlate_with_planted_sign():
    spec = SyntheticSpec(train_per_class=50, test_per_class=0, m=6, d=32,
                         planted=(0,), effect_size=2.0, seed=13)
    data = generate_synthetic(spec)
    # class-signed rank-1 component: row means along the planted direction differ
    ad_rows = np.vstack([s.embedding for s in data.train if s.label == 0])
    hc_rows = np.vstack([s.embedding for s in data.train if s.label == 1])
    gap = np.linalg.norm(ad_rows.mean(axis=0) - hc_rows.mean(axis=0))
    assert gap > 1.0


def test_synthetic_row_counts_within_range():
    spec = SyntheticSpec(train_per_class=20, test_per_class=5, m=6, d=8,
                         n_rows=(3, 9), planted=(1,), seed=5)
    data = generate_synthetic(spec)
    for s in data.train + data.test:
        assert 3 <= s.embedding.shape[0] <= 9


def test_synthetic_validates_planted_indices():
    with pytest.raises(ValueError):
        generate_synthetic(SyntheticSpec(train_per_class=2, test_per_class=0, m=5,
                                         planted=(7,)))


def test_synthetic_truth_record():
    spec = SyntheticSpec(train_per_class=2, test_per_class=1, m=6, d=8, planted=(1, 2), seed=9)
    data = generate_synthetic(spec)
    assert data.truth["planted_indices"] == [1, 2]
    assert data.truth["seed"] == 9
    assert len(data.train) == 4 and len(data.test) == 2
