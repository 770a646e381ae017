import numpy as np
import pytest

from speechcue.wer import WerBreakdown, mean_wer, wer

from oracles import wer_oracle


def test_identical_sequences_zero():
    b = wer("the cat sat".split(), "the cat sat".split())
    assert b.wer == 0.0
    assert (b.substitutions, b.deletions, b.insertions) == (0, 0, 0)


def test_empty_hypothesis_all_deletions():
    b = wer("the cat sat".split(), [])
    assert b.deletions == 3
    assert b.wer == 1.0


def test_empty_reference_raises():
    with pytest.raises(ValueError):
        wer([], "a b".split())


def test_hand_alignment_sub_and_del():
    # ref 6 words, hyp drops "the" and substitutes "sat" -> S=1, D=1, WER=2/6
    b = wer("the cat sat on the mat".split(), "the cat sit on mat".split())
    assert b.substitutions == 1
    assert b.deletions == 1
    assert b.insertions == 0
    assert b.wer == pytest.approx(2.0 / 6.0)
    assert b.wer * b.ref_len == 2


def test_matches_bruteforce_on_random_pairs():
    rng = np.random.Generator(np.random.Philox(42))
    vocab = [f"w{i}" for i in range(6)]
    for _ in range(200):
        ref = [vocab[i] for i in rng.integers(0, len(vocab), rng.integers(1, 13))]
        hyp = [vocab[i] for i in rng.integers(0, len(vocab), rng.integers(0, 13))]
        assert wer(ref, hyp).edits == wer_oracle(ref, hyp)


def test_asymmetry_identity():
    rng = np.random.Generator(np.random.Philox(7))
    vocab = ["a", "b", "c"]
    for _ in range(50):
        x = [vocab[i] for i in rng.integers(0, 3, rng.integers(1, 10))]
        y = [vocab[i] for i in rng.integers(0, 3, rng.integers(1, 10))]
        fwd = wer(x, y)
        rev = wer(y, x)
        # edit counts agree even though the rates are normalized differently
        assert fwd.edits == rev.edits
        assert fwd.wer * len(x) == pytest.approx(rev.wer * len(y))


def test_triangle_inequality_on_edit_counts():
    rng = np.random.Generator(np.random.Philox(3))
    vocab = ["a", "b", "c", "d"]
    for _ in range(100):
        seqs = [
            [vocab[i] for i in rng.integers(0, 4, rng.integers(1, 9))] for _ in range(3)
        ]
        ab = wer_oracle(seqs[0], seqs[1])
        bc = wer_oracle(seqs[1], seqs[2])
        ac = wer(seqs[0], seqs[2]).edits
        assert ac <= ab + bc


def test_mean_wer_per_sample_and_pooled():
    pairs = [("a b".split(), "a b".split()), ("a".split(), "b c".split())]
    # second pair: S=1 I=1 over ref_len 1 -> wer 2.0
    assert mean_wer(pairs) == pytest.approx((0.0 + 2.0) / 2)
    assert mean_wer(pairs, pooled=True) == pytest.approx(2.0 / 3.0)


def test_mean_wer_single_pair():
    pairs = [("x y z".split(), "x z".split())]
    assert mean_wer(pairs) == pytest.approx(wer(*pairs[0]).wer)


def test_mean_wer_zero_one():
    pairs = [("a".split(), "a".split()), ("b".split(), "c".split())]
    assert mean_wer(pairs) == pytest.approx(0.5)


def test_breakdown_consistency():
    b = wer("a b c d".split(), "a x c".split())
    assert isinstance(b, WerBreakdown)
    assert b.edits == b.substitutions + b.deletions + b.insertions
    assert b.wer == b.edits / b.ref_len
