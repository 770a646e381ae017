"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report.  Every tolerance is pinned here, none deferred.
"""

import json
import math
import time

import numpy as np
import pytest

from speechcue import nn
from speechcue.chat import TokenSequence
from speechcue.embed import SyntheticSpec, generate_synthetic
from speechcue.interpret import collect_mean_attention, feature_salience
from speechcue.models import (
    CrossAttentionModel,
    SelfAttentionModel,
    TrainConfig,
    multi_seed_run,
    train,
    save_model,
)
from speechcue.speech import (
    AudioBuffer,
    SegmentKind,
    detect_gci,
    estimate_f0,
    formant_stats,
    phonation_features,
    prosody_features,
    segment_vup,
)
from speechcue.stats import mann_whitney_u
from speechcue.text import mattr, mtld, readability, ttr
from speechcue.wer import wer

from dsp_fixtures import (
    SR,
    glottal_pulse_train,
    sawtooth,
    silence,
    two_resonance_voice,
    voiced_source_through_tract,
)
from oracles import mann_whitney_oracle, mtld_oracle, wer_oracle


def _report(name: str) -> None:
    print(f"\nACCEPTANCE {name}: PASS")


# ---------------------------------------------------------------------------
# 1. Gradient correctness

def test_acceptance_gradient_correctness():
    started = time.monotonic()
    worst = 0.0
    for seed in range(20):
        rng = np.random.Generator(np.random.Philox(seed))

        # individual layers
        x = rng.normal(size=(3, 5))
        w = rng.normal(size=(3, 5))
        out = nn.softmax_rows(x)
        fd = _fd(lambda v: float(np.sum(nn.softmax_rows(v) * w)), x)
        worst = max(worst, _rel(nn.softmax_rows_backward(w, out), fd))

        out_t = nn.tanh(x)
        fd = _fd(lambda v: float(np.sum(nn.tanh(v) * w)), x)
        worst = max(worst, _rel(nn.tanh_backward(w, out_t), fd))

        gain = rng.normal(size=5)
        offset = rng.normal(size=5)
        _, cache = nn.layer_norm(x, gain, offset)
        dx, dgain, doffset = nn.layer_norm_backward(w, cache)
        worst = max(worst, _rel(dx, _fd(lambda v: float(np.sum(nn.layer_norm(v, gain, offset)[0] * w)), x)))

        a = rng.normal(size=(3, 4))
        b = rng.normal(size=(4, 5))
        da, db = nn.matmul_backward(w, a, b)
        worst = max(worst, _rel(da, _fd(lambda v: float(np.sum(nn.matmul(v, b) * w)), a)))
        worst = max(worst, _rel(db, _fd(lambda v: float(np.sum(nn.matmul(a, v) * w)), b)))

        z = rng.normal(size=2)
        _, grad = nn.cross_entropy(z, int(seed % 2))
        fd = _fd(lambda v: nn.cross_entropy(v.reshape(-1), int(seed % 2))[0], z.reshape(1, 2)).reshape(-1)
        worst = max(worst, _rel(grad, fd))

        # full cross-attention model on a toy shape
        cross = CrossAttentionModel(m=7, d=16, pool_hidden=5,
                                    rng=np.random.Generator(np.random.Philox(seed)))
        x_emb = rng.normal(size=(4, 16))
        x_kno = rng.normal(size=7)

        def cross_closure():
            logits, _, _, cache = cross.forward(x_emb, x_kno, want_cache=True)
            loss, dlogits = nn.cross_entropy(logits, 1)
            cross.backward(dlogits, cache)
            return loss

        worst = max(worst, nn.grad_check(cross_closure, cross.params, max_coords_per_param=4,
                                         rng=np.random.Generator(np.random.Philox(seed + 1000))))

        # full self-attention model
        self_model = SelfAttentionModel(d_in=9, hidden=11, pool_hidden=5,
                                        rng=np.random.Generator(np.random.Philox(seed)))
        xs = rng.normal(size=(5, 9))

        def self_closure():
            logits, cache = self_model.forward(xs, want_cache=True)
            loss, dlogits = nn.cross_entropy(logits, 0)
            self_model.backward(dlogits, cache)
            return loss

        worst = max(worst, nn.grad_check(self_closure, self_model.params, max_coords_per_param=4,
                                         rng=np.random.Generator(np.random.Philox(seed + 2000))))

    elapsed = time.monotonic() - started
    assert worst <= 1e-4, f"max relative error {worst}"
    assert elapsed < 60.0, f"gradient checks took {elapsed:.1f}s"
    _report(f"gradient-correctness (max rel err {worst:.2e}, {elapsed:.1f}s, 20 seeds)")


def _fd(f, x, eps=1e-6):
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    flat, g = x.reshape(-1), grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        fp = f(x)
        flat[i] = orig - eps
        fm = f(x)
        flat[i] = orig
        g[i] = (fp - fm) / (2 * eps)
    return grad


def _rel(a, b):
    denom = max(np.max(np.abs(a)) + np.max(np.abs(b)), 1e-8)
    return float(np.max(np.abs(a - b)) / denom)


# ---------------------------------------------------------------------------
# 2. Eq.-1 attention contract

def test_acceptance_attention_contract():
    rng = np.random.Generator(np.random.Philox(7))
    for m in (35, 60):
        model = CrossAttentionModel(m=m, d=1024, pool_hidden=8,
                                    rng=np.random.Generator(np.random.Philox(m)))
        for n in range(1, 17):
            x = rng.normal(size=(n, 1024))
            kno = rng.normal(size=m)
            _, attn, _ = model.forward(x, kno)
            assert attn.shape == (1024, m)
            assert np.max(np.abs(attn.sum(axis=1) - 1.0)) <= 1e-6
        # constant knowledge vector: exactly uniform rows
        for c in (0.0, 0.7, -2.5):
            _, attn, _ = model.forward(rng.normal(size=(4, 1024)), np.full(m, c))
            assert np.array_equal(attn, np.full((1024, m), 1.0 / m)), f"m={m} c={c}"
    _report("attention-contract (n in 1..16, m in {35,60}, exact uniforms)")


# ---------------------------------------------------------------------------
# 3. Planted-cue recovery (end-to-end)

def test_acceptance_planted_cue_recovery():
    started = time.monotonic()
    spec = SyntheticSpec(train_per_class=100, test_per_class=24, m=35, d=1024,
                         n_rows=(4, 8), planted=(4, 11, 12), effect_size=2.0, seed=2024)
    data = generate_synthetic(spec)
    assert len(data.train) == 200 and len(data.test) == 48
    config = TrainConfig(epochs=12, batch_size=16, model="cross", pool_hidden=64)
    result = multi_seed_run(config, data.train, data.test, seeds=list(range(10)))
    assert result.mean_accuracy >= 0.90, f"mean accuracy {result.mean_accuracy}"

    best = result.best()
    mean_attn, used = collect_mean_attention(best.trained, data.test)
    salience = feature_salience(mean_attn)
    top5 = {idx for _, idx, _ in salience.top(5)}
    hits = len(top5 & set(spec.planted))
    assert hits >= 2, f"top-5 {sorted(top5)} contains {hits} planted features"
    elapsed = time.monotonic() - started
    assert elapsed < 300.0, f"planted-cue run took {elapsed:.0f}s"
    _report(
        f"planted-cue-recovery (mean acc {result.mean_accuracy:.3f}, best seed "
        f"{result.best_seed} acc {best.accuracy:.3f}, top5 hits {hits}/3, {elapsed:.0f}s)"
    )


# ---------------------------------------------------------------------------
# 4. WER oracle equivalence

def test_acceptance_wer_oracle():
    rng = np.random.Generator(np.random.Philox(42))
    vocab = [f"w{i}" for i in range(6)]
    for _ in range(200):
        ref = [vocab[i] for i in rng.integers(0, len(vocab), rng.integers(1, 13))]
        hyp = [vocab[i] for i in rng.integers(0, len(vocab), rng.integers(0, 13))]
        assert wer(ref, hyp).edits == wer_oracle(ref, hyp)
        assert wer(ref, ref).wer == 0.0
    hand = wer("the cat sat on the mat".split(), "the cat sit on mat".split())
    assert hand.wer == 2.0 / 6.0
    _report("wer-oracle-equivalence (200 random pairs + hand case 2/6)")


# ---------------------------------------------------------------------------
# 5. Text-feature oracles

def test_acceptance_text_feature_oracles():
    rng = np.random.Generator(np.random.Philox(11))
    vocab = [f"w{i}" for i in range(30)]
    for _ in range(50):
        tokens = [vocab[i] for i in rng.integers(0, len(vocab), 200)]
        assert mtld(tokens) == pytest.approx(mtld_oracle(tokens), abs=1e-12)

    fix1 = ["the", "cat", "sat", "on", "the", "mat"]
    expected = (116.14500000000001, -1.4499999999999993, 2.4000000000000004,
                -4.073333333333338, 0.2976, -5.085000000000001)
    got = readability(fix1, [(0, 6)])
    assert got == pytest.approx(expected, abs=1e-9)

    for _ in range(50):
        tokens = [vocab[i] for i in rng.integers(0, len(vocab), rng.integers(1, 80))]
        assert mattr(tokens, window=len(tokens)) == pytest.approx(ttr(tokens), abs=1e-12)
    _report("text-feature-oracles (MTLD x50, readability 1e-9, MATTR=TTR)")


# ---------------------------------------------------------------------------
# 6. DSP fixtures

def test_acceptance_dsp_fixtures():
    for f0 in (90.0, 120.0, 200.0, 300.0):
        contour = estimate_f0(AudioBuffer(sawtooth(f0, 2.0), SR))
        mean_f0 = float(np.mean(contour.voiced_f0()))
        assert abs(mean_f0 - f0) <= 3.0, f"{f0} Hz recovered as {mean_f0}"

    sigma = 0.04 / (2.0 / math.sqrt(math.pi))
    src, _ = glottal_pulse_train(0.008, 2.0, SR, jitter_sigma=sigma, seed=3)
    audio = AudioBuffer(voiced_source_through_tract(src), SR)
    contour = estimate_f0(audio)
    gci = detect_gci(audio, contour)
    jitter = phonation_features(audio, contour, gci)[0]
    assert 3.0 <= jitter <= 5.0, f"jitter {jitter}"

    tone = sawtooth(150.0, 1.0)
    vpv = AudioBuffer(np.concatenate([tone, silence(1.0), tone]), SR)
    contour = estimate_f0(vpv)
    spans = segment_vup(vpv, contour)
    vals = prosody_features(contour, contour.energy_db, spans)
    pvu, _, uvu, vvu, vp, _ = vals[-6:]
    assert pvu == pytest.approx(0.5, abs=0.015)
    assert vvu == pytest.approx(1.0, abs=0.02)
    assert vp == pytest.approx(2.0, abs=0.08)

    voice = AudioBuffer(two_resonance_voice(formants=((500.0, 80.0), (1500.0, 100.0))), SR)
    f1_mean, _, f2_mean, _ = formant_stats(voice, estimate_f0(voice))
    assert abs(f1_mean - 500.0) <= 50.0
    assert abs(f2_mean - 1500.0) <= 150.0
    _report(
        f"dsp-fixtures (F0 ok, jitter {jitter:.2f} in [3,5], PVU {pvu:.3f}, "
        f"F1 {f1_mean:.0f}, F2 {f2_mean:.0f})"
    )


# ---------------------------------------------------------------------------
# 7. Determinism

def test_acceptance_determinism(tmp_path):
    spec = SyntheticSpec(train_per_class=8, test_per_class=4, m=10, d=32,
                         n_rows=(2, 5), planted=(1, 4, 7), seed=5)
    data = generate_synthetic(spec)
    config = TrainConfig(epochs=3, batch_size=4, model="cross", pool_hidden=4)
    paths = []
    for tag in ("a", "b"):
        trained = train(config, data.train, seed=3)
        path = tmp_path / f"{tag}.ckpt"
        save_model(trained, path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()

    # status JSON hash equality through the CLI
    from speechcue.cli import main
    cfg = {"synth": {"train_per_class": 4, "test_per_class": 2, "m": 6, "d": 8,
                     "planted": [1], "seed": 9}}
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "run"
    assert main(["synth-data", "--config", str(cfg_path), "--out", str(out)]) == 0
    first = (out / "status-synth-data.json").read_bytes()
    assert main(["synth-data", "--config", str(cfg_path), "--out", str(out)]) == 0
    assert (out / "status-synth-data.json").read_bytes() == first
    _report("determinism (bitwise checkpoints + stable status hashes)")


# ---------------------------------------------------------------------------
# 8. Interpretability arithmetic

def test_acceptance_interpretability_arithmetic():
    rng = np.random.Generator(np.random.Philox(21))
    checked = 0
    for na in range(3, 9):
        for nb in range(3, 9):
            a = rng.integers(0, 5, na).astype(float)
            b = rng.integers(0, 5, nb).astype(float)
            assert mann_whitney_u(a, b).u == pytest.approx(mann_whitney_oracle(a, b), abs=1e-12)
            checked += 1

    for m in (35, 60):
        uniform = np.full((1024, m), 1.0 / m)
        salience = feature_salience(uniform)
        assert np.allclose(salience.values, 1.0 / m, atol=1e-15)
        assert salience.values.sum() == pytest.approx(1.0, abs=1e-9)
    _report(f"interpretability-arithmetic (U brute force x{checked}, uniform salience 1/m)")
