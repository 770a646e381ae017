"""Read and patch dataset manifests (the toolkit's documented JSON schema).

The exporter never mutates the source manifest; it writes a patched copy
whose entries gained ``embedding_path`` values relative to the new
manifest's location.
"""

from __future__ import annotations

import json
import os
from pathlib import Path


def load_entries(path: str | Path) -> list[dict]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ValueError(f"{path}: expected an object with an 'entries' list")
    for idx, entry in enumerate(entries):
        for key in ("sample_id", "label", "condition", "split"):
            if not isinstance(entry.get(key), str):
                raise ValueError(f"{path}: entry {idx} missing field {key!r}")
    return entries


def resolve(manifest_path: str | Path, relative: str | None) -> Path | None:
    if relative is None:
        return None
    p = Path(relative)
    return p if p.is_absolute() else (Path(manifest_path).parent / p)


def write_patched(
    entries: list[dict],
    embedding_paths: dict[tuple[str, str], Path],
    source_manifest: str | Path,
    out_manifest: str | Path,
) -> None:
    """Write a manifest copy where (sample_id, condition) keys found in
    ``embedding_paths`` get an embedding_path relative to the output.

    Existing relative paths (transcript/audio/embedding) are re-based
    from the source manifest's directory to the new location so the copy
    stays resolvable.
    """
    out_manifest = Path(out_manifest)
    source_dir = Path(source_manifest).parent
    patched = []
    for entry in entries:
        entry = dict(entry)
        for key in ("transcript_path", "audio_path", "embedding_path"):
            value = entry.get(key)
            if value and not Path(value).is_absolute():
                entry[key] = os.path.relpath(source_dir / value, out_manifest.parent)
        key = (entry["sample_id"], entry["condition"])
        if key in embedding_paths:
            entry["embedding_path"] = os.path.relpath(embedding_paths[key], out_manifest.parent)
        patched.append(entry)
    out_manifest.write_text(
        json.dumps({"entries": patched}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
