"""The 35 knowledge-based text features in canonical index order.

Index map:
  0-3   lexical diversity: ttr, msttr, mattr, mtld
  4-10  content complexity: syllable_count, stopword_count, lexicon_count,
        difficult_word_count, avg_sentence_length, content_density,
        propositional_density
  11-12 disfluencies: filler_pause_ratio, repetition_ratio
  13-23 POS: pronoun, verb, noun, adjective, adverb, conjunction, article,
        determiner, preposition ratios; pronoun_verb; pronoun_noun
  24-29 readability: fre, fkgl, gfi, cli, dcrs, ari
  30-34 psycholinguistic means: familiarity, concreteness, imagability,
        meaningfulness, age_of_acquisition

Zero-denominator ratios fall back to 0 with a diagnostic instead of NaN,
so every vector is finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..chat import FILLER_WORDS, TokenSequence
from . import lexicons
from .diversity import DEFAULT_MTLD_THRESHOLD, DEFAULT_WINDOW, lexical_diversity
from .lexicons import PsycholinguisticLexicon, is_familiar
from .syllables import count_syllables
from .tagging import RuleTagger, Tagger

TEXT_FEATURE_NAMES = (
    "ttr", "msttr", "mattr", "mtld",
    "syllable_count", "stopword_count", "lexicon_count", "difficult_word_count",
    "avg_sentence_length", "content_density", "propositional_density",
    "filler_pause_ratio", "repetition_ratio",
    "pronoun_ratio", "verb_ratio", "noun_ratio", "adjective_ratio", "adverb_ratio",
    "conjunction_ratio", "article_ratio", "determiner_ratio", "preposition_ratio",
    "pronoun_verb_ratio", "pronoun_noun_ratio",
    "fre", "fkgl", "gfi", "cli", "dcrs", "ari",
    "familiarity", "concreteness", "imagability", "meaningfulness", "age_of_acquisition",
)

_CONTENT_TAGS = ("NOUN", "VERB", "ADJ", "ADV")
_PROPOSITION_TAGS = ("VERB", "ADJ", "ADV", "PREP", "CONJ")


@dataclass
class TextFeatureVector:
    values: np.ndarray  # shape (35,)
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(TEXT_FEATURE_NAMES),):
            raise ValueError(f"expected {len(TEXT_FEATURE_NAMES)} values, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("text feature vector contains non-finite values")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(TEXT_FEATURE_NAMES, self.values.tolist()))


@dataclass(frozen=True)
class TextFeatureConfig:
    window: int = DEFAULT_WINDOW
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD


def word_syllables(word: str) -> int:
    """count_syllables tolerant of apostrophes (they are stripped)."""
    return count_syllables(word)


def content_complexity(
    tokens: Sequence[str],
    sentence_bounds: Sequence[tuple[int, int]],
    tags: Sequence[str],
    stop: frozenset[str] | None = None,
    familiar: frozenset[str] | None = None,
    diagnostics: list[str] | None = None,
) -> tuple[float, float, float, float, float, float, float]:
    """Indices 4-10: counts, sentence length and the two density measures."""
    if len(tags) != len(tokens):
        raise ValueError("tags must align with tokens")
    if not tokens:
        raise ValueError("content_complexity: empty token sequence")
    stop = lexicons.stopwords() if stop is None else stop
    familiar = lexicons.familiar_words() if familiar is None else familiar

    syllable_count = float(sum(_safe_syllables(t) for t in tokens))
    stopword_count = float(sum(1 for t in tokens if t.lower() in stop))
    lexicon_count = float(len(tokens))
    difficult = float(sum(1 for t in tokens if not is_familiar(t, familiar)))
    n_sent = len(sentence_bounds)
    if n_sent == 0:
        if diagnostics is not None:
            diagnostics.append("content_complexity: no sentences; avg length = token count")
        avg_len = float(len(tokens))
    else:
        avg_len = len(tokens) / n_sent
    content = sum(1 for t in tags if t in _CONTENT_TAGS) / len(tokens)
    proposition = sum(1 for t in tags if t in _PROPOSITION_TAGS) / len(tokens)
    return (syllable_count, stopword_count, lexicon_count, difficult, avg_len, content, proposition)


def _safe_syllables(token: str) -> int:
    try:
        return count_syllables(token)
    except ValueError:
        return 1  # numeric or other non-alphabetic token


def disfluency_ratios(tokens: Sequence[str]) -> tuple[float, float]:
    """Filler-pause ratio and repetition ratio (indices 11-12).

    A token counts as a repetition when it equals its immediate
    predecessor, or when it belongs to the second copy of an immediately
    repeated bigram.
    """
    if not tokens:
        raise ValueError("disfluency_ratios: empty token sequence")
    lowered = [t.lower() for t in tokens]
    fillers = sum(1 for t in lowered if t in FILLER_WORDS)
    repeated = [False] * len(lowered)
    for i in range(1, len(lowered)):
        if lowered[i] == lowered[i - 1]:
            repeated[i] = True
    for i in range(3, len(lowered)):
        if lowered[i - 1] == lowered[i - 3] and lowered[i] == lowered[i - 2]:
            repeated[i - 1] = True
            repeated[i] = True
    return fillers / len(lowered), sum(repeated) / len(lowered)


def pos_ratios(tags: Sequence[str], diagnostics: list[str] | None = None) -> tuple[float, ...]:
    """Indices 13-23.

    Nine class ratios over the token count; the article class is {a, an,
    the} (tag ART) while the determiner class is ART plus DET.  The two
    cross ratios divide pronoun count by verb / noun count; a zero
    denominator yields 0 with a diagnostic.
    """
    if not tags:
        raise ValueError("pos_ratios: empty tag sequence")
    n = len(tags)
    counts = {tag: 0 for tag in ("PRON", "VERB", "NOUN", "ADJ", "ADV", "CONJ", "ART", "DET", "PREP")}
    for t in tags:
        if t in counts:
            counts[t] += 1
    det_class = counts["DET"] + counts["ART"]
    ratios = [
        counts["PRON"] / n,
        counts["VERB"] / n,
        counts["NOUN"] / n,
        counts["ADJ"] / n,
        counts["ADV"] / n,
        counts["CONJ"] / n,
        counts["ART"] / n,
        det_class / n,
        counts["PREP"] / n,
    ]
    for denom_tag in ("VERB", "NOUN"):
        denom = counts[denom_tag]
        if denom == 0:
            if diagnostics is not None:
                diagnostics.append(f"pos_ratios: no {denom_tag} tags; pronoun ratio set to 0")
            ratios.append(0.0)
        else:
            ratios.append(counts["PRON"] / denom)
    return tuple(ratios)


def readability(
    tokens: Sequence[str],
    sentence_bounds: Sequence[tuple[int, int]],
    familiar: frozenset[str] | None = None,
) -> tuple[float, float, float, float, float, float]:
    """FRE, FKGL, GFI, CLI, DCRS, ARI from the published closed forms."""
    if not tokens:
        raise ValueError("readability: empty token sequence")
    if not sentence_bounds:
        raise ValueError("readability: no sentences")
    familiar = lexicons.familiar_words() if familiar is None else familiar

    lowered = [t.lower() for t in tokens]
    words = len(lowered)
    sentences = len(sentence_bounds)
    syllables = sum(_safe_syllables(t) for t in lowered)
    complex_words = sum(1 for t in lowered if _safe_syllables(t) >= 3)
    letters = sum(sum(c.isalpha() for c in t) for t in lowered)
    chars = sum(sum(c.isalnum() for c in t) for t in lowered)
    difficult = sum(1 for t in lowered if not is_familiar(t, familiar))

    wps = words / sentences
    spw = syllables / words

    fre = 206.835 - 1.015 * wps - 84.6 * spw
    fkgl = 0.39 * wps + 11.8 * spw - 15.59
    gfi = 0.4 * (wps + 100.0 * complex_words / words)
    cli = 0.0588 * (100.0 * letters / words) - 0.296 * (100.0 * sentences / words) - 15.8
    difficult_pct = 100.0 * difficult / words
    dcrs = 0.1579 * difficult_pct + 0.0496 * wps
    if difficult_pct > 5.0:
        dcrs += 3.6365
    ari = 4.71 * (chars / words) + 0.5 * wps - 21.43
    return (fre, fkgl, gfi, cli, dcrs, ari)


def psycholinguistic_means(
    tokens: Sequence[str],
    lexicon: PsycholinguisticLexicon,
    diagnostics: list[str] | None = None,
) -> tuple[float, float, float, float, float]:
    """Indices 30-34: per-dimension mean over tokens with a nonzero rating."""
    sums = [0.0] * 5
    counts = [0] * 5
    for token in tokens:
        ratings = lexicon.get(token)
        if ratings is None:
            continue
        for k, r in enumerate(ratings):
            if r > 0:
                sums[k] += r
                counts[k] += 1
    means = []
    for k, name in enumerate(lexicons.RATING_NAMES):
        if counts[k] == 0:
            if diagnostics is not None:
                diagnostics.append(f"psycholinguistic_means: no rated token for {name}; 0")
            means.append(0.0)
        else:
            means.append(sums[k] / counts[k])
    return tuple(means)  # type: ignore[return-value]


def extract_text_features(
    sequence: TokenSequence,
    tagger: Tagger | None = None,
    lexicon: PsycholinguisticLexicon | None = None,
    config: TextFeatureConfig = TextFeatureConfig(),
) -> TextFeatureVector:
    """Assemble the full 35-entry vector; pure and deterministic."""
    tokens = [t.lower() for t in sequence.tokens]
    if not tokens:
        raise ValueError("extract_text_features: empty token sequence")
    bounds = list(sequence.sentence_bounds)
    diagnostics: list[str] = []
    if not bounds:
        diagnostics.append("extract_text_features: no sentence bounds; whole stream as one sentence")
        bounds = [(0, len(tokens))]
    tagger = tagger or RuleTagger()
    lexicon = lexicon or lexicons.bundled_ratings()
    tags = tagger.tag(tokens)

    div = lexical_diversity(tokens, config.window, config.mtld_threshold)
    complexity = content_complexity(tokens, bounds, tags, diagnostics=diagnostics)
    fillers, repetition = disfluency_ratios(tokens)
    pos = pos_ratios(tags, diagnostics=diagnostics)
    read = readability(tokens, bounds)
    psych = psycholinguistic_means(tokens, lexicon, diagnostics=diagnostics)

    values = np.array(
        (div.ttr, div.msttr, div.mattr, div.mtld)
        + complexity
        + (fillers, repetition)
        + pos
        + read
        + psych,
        dtype=float,
    )
    return TextFeatureVector(values=values, diagnostics=diagnostics)
