"""speechcue: interpretable speech-and-language cue extraction and
cross-attention classification.

The toolkit covers CHAT transcript processing, 35 knowledge-based text
features, 60 knowledge-based speech features from raw audio, a binary
embedding-matrix store with synthetic planted-cue data generation, two
small attention classifiers trained with hand-derived gradients and
AdamW, attention-score interpretability analysis, and word error rate
evaluation.
"""

__version__ = "0.1.0"

from . import chat, embed, interpret, manifest, models, nn, speech, stats, text, wer  # noqa: F401
from .chat import TokenSequence, Transcript, concat_token_sequences, normalize_tokens, parse_chat
from .embed import Sample, SyntheticSpec, generate_synthetic, read_embedding, write_embedding
from .manifest import DatasetManifest, load_manifest
from .models import (
    CrossAttentionModel,
    SelfAttentionModel,
    TrainConfig,
    evaluate,
    multi_seed_run,
    train,
)
from .text import TEXT_FEATURE_NAMES, extract_text_features
from .wer import WerBreakdown, mean_wer

__all__ = [
    "TEXT_FEATURE_NAMES",
    "CrossAttentionModel",
    "DatasetManifest",
    "Sample",
    "SelfAttentionModel",
    "SyntheticSpec",
    "TokenSequence",
    "TrainConfig",
    "Transcript",
    "WerBreakdown",
    "concat_token_sequences",
    "evaluate",
    "extract_text_features",
    "generate_synthetic",
    "load_manifest",
    "mean_wer",
    "multi_seed_run",
    "normalize_tokens",
    "parse_chat",
    "read_embedding",
    "train",
    "write_embedding",
]
