"""embexport: one-shot extraction of pre-trained embeddings to EMB1 files.

A pure exporter: it reads the dataset manifest (documented JSON schema),
runs local text/speech transformer models, writes hidden-layer states as
EMB1 matrices, and emits a patched manifest copy pointing at them.  It
never computes features or trains anything.
"""

__version__ = "0.1.0"

from .emb1 import write_emb1
from .jobs import (
    DEFAULT_SPEECH_LAYER,
    DEFAULT_TEXT_LAYER,
    ExtractionJob,
    JobError,
    JobReport,
    extract_speech_embeddings,
    extract_text_embeddings,
)

__all__ = [
    "DEFAULT_SPEECH_LAYER",
    "DEFAULT_TEXT_LAYER",
    "ExtractionJob",
    "JobError",
    "JobReport",
    "extract_speech_embeddings",
    "extract_text_embeddings",
    "write_emb1",
]
