import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speechcue.chat import TokenSequence
from speechcue.text import (
    TEXT_FEATURE_NAMES,
    PretaggedSequence,
    RuleTagger,
    TextFeatureConfig,
    content_complexity,
    count_syllables,
    disfluency_ratios,
    extract_text_features,
    load_mrc,
    mattr,
    msttr,
    mtld,
    pos_ratios,
    psycholinguistic_means,
    readability,
    ttr,
)
from speechcue.text.lexicons import (
    PsycholinguisticLexicon,
    bundled_ratings,
    familiar_words,
    is_familiar,
    stopwords,
)

from oracles import mtld_oracle

WORDS = st.sampled_from(["the", "cat", "boy", "water", "runs", "uh", "cookie", "big"])


# ---------------------------------------------------------------------------
# syllables

@pytest.mark.parametrize(
    "word,expected",
    [
        ("cat", 1),
        ("cookie", 2),   # silent-e drop leaves the 'i' group intact
        ("table", 2),    # consonant + le keeps its final-e syllable
        ("the", 1),
        ("pale", 1),
        ("running", 2),
        ("archaeologist", 4),  # 'aeo' is one vowel group
        ("unprecedented", 5),
        ("phenomena", 4),
        ("examined", 4),
        ("boy's", 1),
    ],
)
def test_syllable_counts(word, expected):
    assert count_syllables(word) == expected


def test_syllables_rejects_bad_input():
    for bad in ("", "123", "a1b"):
        with pytest.raises(ValueError):
            count_syllables(bad)


# ---------------------------------------------------------------------------
# lexical diversity

def test_ttr_simple():
    assert ttr(["the", "cat", "the", "cat"]) == 0.5


def test_mattr_hand_case():
    # windows of 3 over [a b a b a]: each window has 2 types -> 2/3
    assert mattr(["a", "b", "a", "b", "a"], window=3) == pytest.approx(2.0 / 3.0)


def test_mattr_equals_ttr_when_window_is_length():
    tokens = ["a", "b", "b", "c", "a"]
    assert mattr(tokens, window=len(tokens)) == pytest.approx(ttr(tokens))


def test_msttr_single_full_window_equals_ttr():
    tokens = ["a", "b", "b", "c"]
    assert msttr(tokens, window=4) == pytest.approx(ttr(tokens))


def test_msttr_drops_trailing_partial_window():
    tokens = ["a", "a", "b", "c", "zzz"]  # window 2: [a a]=0.5, [b c]=1.0; "zzz" dropped
    assert msttr(tokens, window=2) == pytest.approx(0.75)


def test_mtld_matches_bruteforce_on_random_sequences():
    rng = np.random.Generator(np.random.Philox(11))
    vocab = [f"w{i}" for i in range(30)]
    for _ in range(50):
        tokens = [vocab[i] for i in rng.integers(0, len(vocab), 200)]
        assert mtld(tokens) == pytest.approx(mtld_oracle(tokens), abs=1e-12)


def test_mtld_all_unique_matches_oracle_and_documented_scaling():
    tokens = [f"u{i}" for i in range(40)]
    value = mtld(tokens)
    assert value == pytest.approx(mtld_oracle(tokens))
    assert value == pytest.approx(len(tokens) / (1.0 - 0.72))


def test_empty_inputs_raise():
    for fn in (ttr, mtld):
        with pytest.raises(ValueError):
            fn([])


@settings(max_examples=40)
@given(st.lists(WORDS, min_size=1, max_size=60))
def test_mattr_window_len_property(tokens):
    assert mattr(tokens, window=len(tokens)) == pytest.approx(ttr(tokens))


@settings(max_examples=40)
@given(st.lists(WORDS, min_size=5, max_size=120))
def test_mtld_oracle_property(tokens):
    assert mtld(tokens) == pytest.approx(mtld_oracle(tokens), abs=1e-12)


# ---------------------------------------------------------------------------
# content complexity

def test_content_complexity_hand_case():
    vals = content_complexity(["the", "cat", "sat"], [(0, 3)], ["ART", "NOUN", "VERB"])
    syll, stop, lex, diff, avg_len, content, prop = vals
    assert lex == 3
    assert avg_len == 3
    assert content == pytest.approx(2.0 / 3.0)
    assert prop == pytest.approx(1.0 / 3.0)


def test_content_density_zero_for_stopword_tags():
    vals = content_complexity(["the", "of"], [(0, 2)], ["ART", "PREP"])
    assert vals[5] == 0.0


def test_propositional_density_hand_count():
    vals = content_complexity(
        ["the", "boy", "is", "taking", "cookies"],
        [(0, 5)],
        ["ART", "NOUN", "VERB", "VERB", "NOUN"],
    )
    assert vals[6] == pytest.approx(2.0 / 5.0)


def test_zero_sentences_falls_back_with_diagnostic():
    diag = []
    vals = content_complexity(["a", "b"], [], ["ART", "NOUN"], diagnostics=diag)
    assert vals[4] == 2.0
    assert diag


def test_difficult_words_use_inflection_stripping():
    familiar = frozenset({"cookie", "run"})
    assert is_familiar("cookies", familiar)
    assert is_familiar("running", familiar)
    assert not is_familiar("archaeologist", familiar)


# ---------------------------------------------------------------------------
# disfluencies

def test_filler_ratio():
    filler, _ = disfluency_ratios(["um", "the", "cat", "uh"])
    assert filler == 0.5


def test_repetition_immediate_token():
    _, rep = disfluency_ratios(["the", "the", "boy"])
    assert rep == pytest.approx(1.0 / 3.0)


def test_repetition_bigram_rule():
    _, rep = disfluency_ratios(["i", "want", "i", "want", "it"])
    assert rep == pytest.approx(2.0 / 5.0)


def test_no_disfluencies():
    filler, rep = disfluency_ratios(["a", "b", "c"])
    assert filler == 0.0 and rep == 0.0


# ---------------------------------------------------------------------------
# POS ratios

def test_pos_ratios_hand_case():
    r = pos_ratios(["PRON", "VERB"])
    assert r[0] == 0.5  # pronoun
    assert r[1] == 0.5  # verb
    assert r[9] == 1.0  # pronoun/verb


def test_pos_ratio_zero_denominator():
    diag = []
    r = pos_ratios(["PRON", "VERB"], diagnostics=diag)
    assert r[10] == 0.0  # no nouns
    assert any("NOUN" in d for d in diag)


def test_pronoun_verb_two_to_one():
    r = pos_ratios(["PRON", "PRON", "VERB", "NOUN"])
    assert r[9] == 2.0


def test_determiner_class_includes_articles():
    r = pos_ratios(["ART", "DET", "NOUN", "NOUN"])
    assert r[6] == pytest.approx(0.25)   # article ratio: only ART
    assert r[7] == pytest.approx(0.5)    # determiner ratio: ART + DET


def test_rule_tagger_basic_choices():
    tagger = RuleTagger()
    tags = tagger.tag(["the", "boy", "is", "quickly", "taking", "cookies", "uh"])
    assert tags == ["ART", "NOUN", "VERB", "ADV", "VERB", "NOUN", "OTHER"]


def test_pretagged_sequence_validates_alignment():
    pre = PretaggedSequence([("the", "ART"), ("boy", "NOUN")])
    assert pre.tag(["the", "boy"]) == ["ART", "NOUN"]
    with pytest.raises(ValueError):
        pre.tag(["the"])
    with pytest.raises(ValueError):
        pre.tag(["a", "boy"])


# ---------------------------------------------------------------------------
# readability: frozen hand-computed table
# (counts derived by hand per fixture; formulas evaluated independently)

FIX1 = ["the", "cat", "sat", "on", "the", "mat"]          # 6w 1s 6syll 17letters
FIX2 = ["the", "archaeologist", "examined", "unprecedented", "phenomena"]
FIX3 = ["a", "boy", "and", "a", "girl", "are", "in", "the", "kitchen",
        "the", "water", "is", "running"]                   # 13w 2s 16syll 44letters

READABILITY_TABLE = {
    "fix1": (116.14500000000001, -1.4499999999999993, 2.4000000000000004,
             -4.073333333333338, 0.2976, -5.085000000000001),
    "fix2": (-102.79999999999998, 28.840000000000007, 34.0,
             32.37599999999999, 16.5165, 24.401999999999994),
    "fix3": (96.11442307692309, 1.468076923076925, 2.6,
             -0.4523076923076932, 0.32239999999999996, -2.238461538461536),
}


def test_readability_fixture_1():
    got = readability(FIX1, [(0, 6)])
    assert got == pytest.approx(READABILITY_TABLE["fix1"], abs=1e-9)


def test_readability_fixture_2_difficult_branch():
    got = readability(FIX2, [(0, 5)])
    assert got == pytest.approx(READABILITY_TABLE["fix2"], abs=1e-9)


def test_readability_fixture_3_two_sentences():
    got = readability(FIX3, [(0, 9), (9, 13)])
    assert got == pytest.approx(READABILITY_TABLE["fix3"], abs=1e-9)


def test_readability_case_invariant():
    upper = [t.upper() for t in FIX1]
    assert readability(upper, [(0, 6)]) == pytest.approx(readability(FIX1, [(0, 6)]), abs=0)


def test_gfi_reduces_without_complex_words():
    fre, fkgl, gfi, *_ = readability(FIX1, [(0, 6)])
    assert gfi == pytest.approx(0.4 * 6.0)


def test_readability_requires_sentences():
    with pytest.raises(ValueError):
        readability(FIX1, [])


# ---------------------------------------------------------------------------
# psycholinguistic means

def _lexicon(entries):
    return PsycholinguisticLexicon(ratings=dict(entries))


def test_unrated_tokens_give_zero_with_diagnostic():
    diag = []
    vals = psycholinguistic_means(["zork", "blarg"], _lexicon({}), diagnostics=diag)
    assert vals == (0.0,) * 5
    assert len(diag) == 5


def test_single_rated_token():
    lex = _lexicon({"cat": (500, 0, 0, 0, 0)})
    vals = psycholinguistic_means(["cat"], lex)
    assert vals[0] == 500.0
    assert vals[1] == 0.0  # concreteness unrated -> excluded -> fallback 0


def test_mean_of_two_ratings():
    lex = _lexicon({"cat": (400, 0, 0, 0, 0), "dog": (600, 0, 0, 0, 0)})
    assert psycholinguistic_means(["cat", "dog"], lex)[0] == 500.0


def test_token_instances_counted_not_types():
    lex = _lexicon({"cat": (400, 0, 0, 0, 0), "dog": (700, 0, 0, 0, 0)})
    vals = psycholinguistic_means(["cat", "cat", "dog"], lex)
    assert vals[0] == pytest.approx((400 + 400 + 700) / 3)


# ---------------------------------------------------------------------------
# ratings file loader

def test_bundled_subset_loads():
    lex = bundled_ratings()
    assert len(lex) >= 50
    assert lex.get("cookie") is not None
    assert lex.get("COOKIE") == lex.get("cookie")


def test_tsv_loader_skips_truncated_lines(tmp_path):
    path = tmp_path / "ratings.tsv"
    path.write_text("cat\t500\t600\t610\t480\t190\ndog\t500\t600\n")
    lex = load_mrc(path)
    assert len(lex) == 1
    assert lex.skipped == 1


def test_fixed_width_record_parsed(tmp_path):
    line = [" "] * 51
    line[25:28] = "488"
    line[28:31] = "589"
    line[31:34] = "604"
    line[34:37] = "512"
    line[40:43] = "202"
    record = "".join(line) + "CAT|kat|2|K"
    path = tmp_path / "dict.dct"
    path.write_text(record + "\n")
    lex = load_mrc(path)
    assert lex.get("cat") == (488, 589, 604, 512, 202)


def test_zero_rating_loaded_but_excluded_downstream(tmp_path):
    path = tmp_path / "ratings.tsv"
    path.write_text("cat\t0\t600\t610\t480\t190\n")
    lex = load_mrc(path)
    assert lex.get("cat")[0] == 0
    vals = psycholinguistic_means(["cat"], lex)
    assert vals[0] == 0.0      # familiarity unrated
    assert vals[1] == 600.0


# ---------------------------------------------------------------------------
# full assembly

def _sequence(tokens, bounds=None):
    bounds = bounds if bounds is not None else [(0, len(tokens))]
    return TokenSequence(tokens=list(tokens), sentence_bounds=bounds)


def test_extract_produces_all_35_named_features():
    seq = _sequence(FIX3, [(0, 9), (9, 13)])
    vec = extract_text_features(seq)
    assert vec.values.shape == (35,)
    assert len(TEXT_FEATURE_NAMES) == 35
    assert np.all(np.isfinite(vec.values))


def test_extract_matches_component_values():
    seq = _sequence(FIX3, [(0, 9), (9, 13)])
    vec = extract_text_features(seq)
    d = vec.as_dict()
    assert d["ttr"] == pytest.approx(ttr([t.lower() for t in FIX3]))
    assert d["fre"] == pytest.approx(READABILITY_TABLE["fix3"][0], abs=1e-9)
    assert d["ari"] == pytest.approx(READABILITY_TABLE["fix3"][5], abs=1e-9)
    filler, rep = disfluency_ratios(FIX3)
    assert d["filler_pause_ratio"] == pytest.approx(filler)
    assert d["repetition_ratio"] == pytest.approx(rep)
    assert d["lexicon_count"] == 13.0


def test_extract_empty_stream_errors():
    seq = _sequence([], [])
    with pytest.raises(ValueError):
        extract_text_features(seq)


def test_extract_is_pure_bitwise():
    seq = _sequence(["the", "boy", "takes", "uh", "cookies"], [(0, 5)])
    a = extract_text_features(seq).values
    b = extract_text_features(seq).values
    assert np.array_equal(a, b)


def test_sentence_permutation_leaves_order_insensitive_indices():
    s1 = ["the", "boy", "falls"]
    s2 = ["water", "overflows", "everywhere"]
    seq_a = _sequence(s1 + s2, [(0, 3), (3, 6)])
    seq_b = _sequence(s2 + s1, [(0, 3), (3, 6)])
    va = extract_text_features(seq_a).values
    vb = extract_text_features(seq_b).values
    for idx in (0, 4, 5, 6, 7):
        assert va[idx] == vb[idx]


def test_ratio_invariants_on_real_extraction():
    seq = _sequence(
        ["uh", "the", "boy", "is", "taking", "the", "the", "cookies", "from", "the", "jar"],
        [(0, 11)],
    )
    vec = extract_text_features(seq)
    d = vec.as_dict()
    for name in ("ttr", "msttr", "mattr", "filler_pause_ratio", "repetition_ratio",
                 "content_density", "propositional_density"):
        assert 0.0 <= d[name] <= 1.0
    for idx in (4, 5, 6, 7):
        assert vec.values[idx] == int(vec.values[idx]) >= 0


def test_stopword_asset_nonempty():
    assert "the" in stopwords()
    assert "cookie" not in stopwords()
    assert "the" in familiar_words()
