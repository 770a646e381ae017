import json
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture(scope="session")
def tiny_text_model(tmp_path_factory):
    """A 12-layer miniature BERT-style model with a toy WordPiece vocab,
    saved locally so the adapter loads it like any pre-trained model."""
    from transformers import BertConfig, BertModel, BertTokenizerFast

    root = tmp_path_factory.mktemp("tiny-bert")
    vocab = [
        "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
        "the", "boy", "is", "taking", "cookies", "water", "running",
        "over", "stool", "falls", "a", "jar", "##s", "##ing",
    ]
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(vocab))
    tokenizer = BertTokenizerFast(vocab_file=str(vocab_file))
    config = BertConfig(
        vocab_size=len(vocab), hidden_size=32, num_hidden_layers=12,
        num_attention_heads=2, intermediate_size=37, max_position_embeddings=16,
    )
    import torch
    torch.manual_seed(0)
    model = BertModel(config)
    model_dir = root / "model"
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    return model_dir


@pytest.fixture(scope="session")
def tiny_speech_model(tmp_path_factory):
    """A 12-layer miniature speech encoder (conv feature extractor +
    transformer), saved locally."""
    from transformers import Wav2Vec2Config, Wav2Vec2Model

    root = tmp_path_factory.mktemp("tiny-w2v")
    config = Wav2Vec2Config(
        hidden_size=32, num_hidden_layers=12, num_attention_heads=2,
        intermediate_size=37, conv_dim=(16, 16, 16, 16, 16, 16, 16),
        num_feat_extract_layers=7,
    )
    import torch
    torch.manual_seed(0)
    model = Wav2Vec2Model(config)
    model_dir = root / "model"
    model.save_pretrained(model_dir)
    return model_dir


def write_wav(path: Path, samples: np.ndarray, rate: int = 16000) -> None:
    from scipy.io import wavfile

    wavfile.write(path, rate, (np.clip(samples, -1, 1) * 32767).astype(np.int16))


def make_manifest(tmp_path: Path, entries: list[dict]) -> Path:
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"entries": entries}))
    return path
