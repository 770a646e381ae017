"""Hidden-state extraction jobs.

Text: the configured transformer layer's hidden states per sample, with
the two boundary tokens ([CLS]/[SEP]) dropped, giving an n x hidden EMB1
matrix where n is the subword count.  Inputs longer than the model
window are split into window-sized chunks (each gets its own boundary
tokens, which are dropped again) and concatenated, so row counts stay
additive.

Speech: audio is cut into fixed-length chunks (default 30 s), each chunk
runs through the speech model, and the configured layer's frame
sequences concatenate along the time axis into a T x hidden matrix.

Layer indexing: ``layer`` selects ``hidden_states[layer]`` where index 0
is the embedding output and index k the k-th transformer layer, i.e. the
defaults (text 11, speech 8) are 1-based transformer layers.  For the
0-based reading of the same convention, pass the index you mean; any
value within ``len(hidden_states)`` is accepted.

Text errors abort the job (they indicate data problems); undecodable
audio is recorded per sample and the job continues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .emb1 import write_emb1
from .manifest import load_entries, resolve, write_patched

DEFAULT_TEXT_LAYER = 11
DEFAULT_SPEECH_LAYER = 8


class JobError(Exception):
    pass


@dataclass(frozen=True)
class ExtractionJob:
    manifest: Path
    modality: str                 # "text" | "speech"
    model_path: Path
    output_dir: Path
    layer: int | None = None      # None -> modality default
    chunk_s: float = 30.0
    sample_rate: int = 16000
    condition: str | None = None  # None -> all entries with a source path

    def effective_layer(self) -> int:
        if self.layer is not None:
            return self.layer
        return DEFAULT_TEXT_LAYER if self.modality == "text" else DEFAULT_SPEECH_LAYER

    def validate(self) -> None:
        if self.modality not in ("text", "speech"):
            raise JobError(f"unknown modality {self.modality!r}")
        if self.chunk_s <= 0:
            raise JobError("chunk length must be positive")
        if self.layer is not None and self.layer < 0:
            raise JobError("layer index must be non-negative")


@dataclass
class JobReport:
    written: dict[str, Path] = field(default_factory=dict)   # sample_id -> EMB1 path
    skipped: dict[str, str] = field(default_factory=dict)    # sample_id -> reason
    patched_manifest: Path | None = None


def _load_text_model(model_path: Path):
    try:
        import torch
        from transformers import AutoModel, AutoTokenizer
    except ImportError as exc:
        raise JobError(f"transformers/torch unavailable: {exc}") from exc
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_path)
        model = AutoModel.from_pretrained(model_path)
    except Exception as exc:
        raise JobError(f"cannot load text model from {model_path}: {exc}") from exc
    model.eval()
    return torch, tokenizer, model


def _load_speech_model(model_path: Path):
    try:
        import torch
        from transformers import AutoModel
    except ImportError as exc:
        raise JobError(f"transformers/torch unavailable: {exc}") from exc
    try:
        model = AutoModel.from_pretrained(model_path)
    except Exception as exc:
        raise JobError(f"cannot load speech model from {model_path}: {exc}") from exc
    model.eval()
    return torch, model


def _job_entries(job: ExtractionJob, path_key: str) -> tuple[list[dict], list[dict]]:
    entries = load_entries(job.manifest)
    wanted = [
        e for e in entries
        if (job.condition is None or e["condition"] == job.condition) and e.get(path_key)
    ]
    if not wanted:
        raise JobError(
            f"no manifest entries with {path_key}"
            + (f" and condition {job.condition!r}" if job.condition else "")
        )
    return entries, wanted


def extract_text_embeddings(job: ExtractionJob) -> JobReport:
    job.validate()
    torch, tokenizer, model = _load_text_model(job.model_path)
    layer = job.effective_layer()
    depth = getattr(model.config, "num_hidden_layers", None)
    if depth is not None and layer > depth:
        raise JobError(f"layer {layer} outside model depth {depth}")
    window = int(getattr(model.config, "max_position_embeddings", 512))

    entries, wanted = _job_entries(job, "transcript_path")
    job.output_dir.mkdir(parents=True, exist_ok=True)
    report = JobReport()
    paths: dict[tuple[str, str], Path] = {}
    for entry in wanted:
        source = resolve(job.manifest, entry["transcript_path"])
        text = source.read_text(encoding="utf-8").strip()
        if not text:
            raise JobError(f"{entry['sample_id']}: empty text in {source}")
        ids = tokenizer(text, add_special_tokens=False)["input_ids"]
        if not ids:
            raise JobError(f"{entry['sample_id']}: no tokens after tokenization")
        cls_id = getattr(tokenizer, "cls_token_id", None)
        sep_id = getattr(tokenizer, "sep_token_id", None)
        prefix = [cls_id] if cls_id is not None else []
        suffix = [sep_id] if sep_id is not None else []
        pieces = []
        step = max(window - len(prefix) - len(suffix), 1)
        for start in range(0, len(ids), step):
            chunk = ids[start : start + step]
            input_ids = torch.tensor([prefix + chunk + suffix])
            with torch.no_grad():
                out = model(input_ids=input_ids, output_hidden_states=True)
            states = out.hidden_states[layer][0]
            end = states.shape[0] - len(suffix)
            pieces.append(states[len(prefix) : end].numpy())  # boundary tokens dropped
        matrix = np.concatenate(pieces, axis=0)
        emb_path = job.output_dir / f"{_slug(entry['sample_id'])}-{_slug(entry['condition'])}.emb"
        write_emb1(emb_path, matrix)
        report.written[entry["sample_id"]] = emb_path
        paths[(entry["sample_id"], entry["condition"])] = emb_path

    out_manifest = job.output_dir / "manifest.json"
    write_patched(entries, paths, job.manifest, out_manifest)
    report.patched_manifest = out_manifest
    return report


def extract_speech_embeddings(job: ExtractionJob) -> JobReport:
    job.validate()
    torch, model = _load_speech_model(job.model_path)
    layer = job.effective_layer()
    depth = getattr(model.config, "num_hidden_layers", None)
    if depth is not None and layer > depth:
        raise JobError(f"layer {layer} outside model depth {depth}")

    entries, wanted = _job_entries(job, "audio_path")
    job.output_dir.mkdir(parents=True, exist_ok=True)
    report = JobReport()
    paths: dict[tuple[str, str], Path] = {}
    chunk_len = int(job.chunk_s * job.sample_rate)
    for entry in wanted:
        source = resolve(job.manifest, entry["audio_path"])
        try:
            samples = _read_audio(source, job.sample_rate)
        except Exception as exc:
            report.skipped[entry["sample_id"]] = f"{type(exc).__name__}: {exc}"
            continue
        pieces = []
        for start in range(0, len(samples), chunk_len):
            chunk = samples[start : start + chunk_len]
            if len(chunk) < 2:
                continue
            normalized = (chunk - chunk.mean()) / (chunk.std() + 1e-7)
            x = torch.tensor(normalized[None, :], dtype=torch.float32)
            with torch.no_grad():
                out = model(x, output_hidden_states=True)
            pieces.append(out.hidden_states[layer][0].numpy())
        if not pieces:
            report.skipped[entry["sample_id"]] = "audio too short for one model frame"
            continue
        matrix = np.concatenate(pieces, axis=0)
        emb_path = job.output_dir / f"{_slug(entry['sample_id'])}-{_slug(entry['condition'])}.emb"
        write_emb1(emb_path, matrix)
        report.written[entry["sample_id"]] = emb_path
        paths[(entry["sample_id"], entry["condition"])] = emb_path

    out_manifest = job.output_dir / "manifest.json"
    write_patched(entries, paths, job.manifest, out_manifest)
    report.patched_manifest = out_manifest
    return report


def _read_audio(path: Path, target_rate: int) -> np.ndarray:
    from scipy.io import wavfile

    rate, data = wavfile.read(path)
    data = np.asarray(data)
    if data.ndim == 2:
        data = data.mean(axis=1)
    if np.issubdtype(data.dtype, np.integer):
        data = data.astype(np.float64) / (float(np.iinfo(data.dtype).max) + 1.0)
    else:
        data = data.astype(np.float64)
    if rate != target_rate:
        duration = len(data) / rate
        n_out = int(round(duration * target_rate))
        data = np.interp(
            np.linspace(0.0, len(data) - 1, n_out), np.arange(len(data)), data
        )
    return data


def _slug(tag: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in tag)
