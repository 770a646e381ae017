"""Dataset manifests: sample ids mapped to labels, conditions and files.

A manifest is UTF-8 JSON with a top-level ``entries`` list.  Each entry
carries ``sample_id``, ``label`` (AD|HC), ``condition`` (free tag such as
``manual``, ``asr:whisper-small``, ``original-speech``), ``split``
(train|test) and optional ``transcript_path`` / ``audio_path`` /
``embedding_path``.  Relative paths resolve against the manifest's
directory and must exist at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

LABELS = ("AD", "HC")
SPLITS = ("train", "test")

_PATH_KEYS = ("transcript_path", "audio_path", "embedding_path")


class ManifestError(Exception):
    """Base class for manifest loading failures."""


class ManifestSchemaError(ManifestError):
    pass


class DuplicateEntryError(ManifestError):
    pass


class MissingPathError(ManifestError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    label: str
    condition: str
    split: str
    transcript_path: Path | None = None
    audio_path: Path | None = None
    embedding_path: Path | None = None

    def label_index(self) -> int:
        return LABELS.index(self.label)


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry] = field(default_factory=list)
    root: Path = Path(".")

    def for_condition(self, condition: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.condition == condition]

    def conditions(self) -> list[str]:
        return sorted({e.condition for e in self.entries})


def load_manifest(path: str | Path) -> DatasetManifest:
    """Load and validate a manifest file.

    Distinct failures raise distinct exceptions: FileNotFoundError for a
    missing file, ManifestSchemaError for malformed JSON or bad fields,
    DuplicateEntryError for a repeated (sample_id, condition) pair, and
    MissingPathError naming the entry whose referenced file is absent.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestSchemaError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ManifestSchemaError(f"{path}: expected an object with an 'entries' list")

    root = path.parent
    manifest = DatasetManifest(root=root)
    seen: set[tuple[str, str]] = set()
    for idx, item in enumerate(doc["entries"]):
        if not isinstance(item, dict):
            raise ManifestSchemaError(f"{path}: entry {idx} is not an object")
        for key in ("sample_id", "label", "condition", "split"):
            if not isinstance(item.get(key), str) or not item[key]:
                raise ManifestSchemaError(f"{path}: entry {idx} missing or invalid '{key}'")
        if item["label"] not in LABELS:
            raise ManifestSchemaError(
                f"{path}: entry {idx} label {item['label']!r} not in {LABELS}"
            )
        if item["split"] not in SPLITS:
            raise ManifestSchemaError(
                f"{path}: entry {idx} split {item['split']!r} not in {SPLITS}"
            )
        key = (item["sample_id"], item["condition"])
        if key in seen:
            raise DuplicateEntryError(
                f"{path}: duplicate sample_id/condition {key[0]!r}/{key[1]!r}"
            )
        seen.add(key)

        paths: dict[str, Path | None] = {}
        for pkey in _PATH_KEYS:
            value = item.get(pkey)
            if value is None:
                paths[pkey] = None
                continue
            if not isinstance(value, str):
                raise ManifestSchemaError(f"{path}: entry {idx} '{pkey}' must be a string")
            resolved = (root / value).resolve() if not Path(value).is_absolute() else Path(value)
            if not resolved.exists():
                raise MissingPathError(
                    f"{path}: entry {item['sample_id']!r} ({item['condition']!r}): "
                    f"{pkey} does not exist: {resolved}"
                )
            paths[pkey] = resolved
        manifest.entries.append(
            ManifestEntry(
                sample_id=item["sample_id"],
                label=item["label"],
                condition=item["condition"],
                split=item["split"],
                **paths,
            )
        )
    return manifest


def save_manifest(entries: Iterable[dict], path: str | Path) -> None:
    """Write a manifest JSON file; paths are stored as given (ideally
    relative to the manifest location)."""
    path = Path(path)
    doc = {"entries": list(entries)}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
