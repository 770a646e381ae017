"""Knowledge-based text features."""

from .diversity import DiversityScores, lexical_diversity, mattr, msttr, mtld, ttr
from .features import (
    TEXT_FEATURE_NAMES,
    TextFeatureConfig,
    TextFeatureVector,
    content_complexity,
    disfluency_ratios,
    extract_text_features,
    pos_ratios,
    psycholinguistic_means,
    readability,
)
from .lexicons import PsycholinguisticLexicon, load_mrc
from .syllables import count_syllables
from .tagging import COARSE_TAGS, PretaggedSequence, RuleTagger, read_tagged_tsv

__all__ = [
    "COARSE_TAGS",
    "TEXT_FEATURE_NAMES",
    "DiversityScores",
    "PretaggedSequence",
    "PsycholinguisticLexicon",
    "RuleTagger",
    "TextFeatureConfig",
    "TextFeatureVector",
    "content_complexity",
    "count_syllables",
    "disfluency_ratios",
    "extract_text_features",
    "lexical_diversity",
    "load_mrc",
    "mattr",
    "msttr",
    "mtld",
    "pos_ratios",
    "psycholinguistic_means",
    "read_tagged_tsv",
    "readability",
    "ttr",
]
