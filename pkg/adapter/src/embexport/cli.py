"""embexport: export pre-trained hidden states to EMB1 files.

    embexport text   --manifest m.json --model <dir> --out <dir> [--layer 11]
    embexport speech --manifest m.json --model <dir> --out <dir> [--layer 8]
                     [--chunk-s 30] [--sample-rate 16000]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import ExtractionJob, JobError, extract_speech_embeddings, extract_text_embeddings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embexport", description=__doc__)
    sub = parser.add_subparsers(dest="modality", required=True)
    for modality in ("text", "speech"):
        p = sub.add_parser(modality)
        p.add_argument("--manifest", required=True)
        p.add_argument("--model", required=True, help="local pre-trained model directory")
        p.add_argument("--out", required=True, help="output directory for EMB1 files")
        p.add_argument("--layer", type=int, default=None,
                       help="hidden-state index (default: text 11, speech 8)")
        p.add_argument("--condition", default=None, help="only process this condition tag")
        if modality == "speech":
            p.add_argument("--chunk-s", type=float, default=30.0)
            p.add_argument("--sample-rate", type=int, default=16000)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = ExtractionJob(
        manifest=Path(args.manifest),
        modality=args.modality,
        model_path=Path(args.model),
        output_dir=Path(args.out),
        layer=args.layer,
        chunk_s=getattr(args, "chunk_s", 30.0),
        sample_rate=getattr(args, "sample_rate", 16000),
        condition=args.condition,
    )
    try:
        if args.modality == "text":
            report = extract_text_embeddings(job)
        else:
            report = extract_speech_embeddings(job)
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(report.written)} EMB1 files to {job.output_dir}")
    for sample_id, reason in report.skipped.items():
        print(f"skipped {sample_id}: {reason}", file=sys.stderr)
    print(f"patched manifest: {report.patched_manifest}")
    return 0 if not report.skipped else 3


if __name__ == "__main__":
    sys.exit(main())
