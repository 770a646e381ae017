"""Config-driven command-line front end.

Subcommands: parse-chat, text-feats, speech-feats, wer, synth-data,
train, evaluate, interpret.  Every subcommand writes its artifacts plus a
``status-<command>.json`` into the output directory.  The status file
holds the merged config snapshot, content hashes of the inputs, the
output names and the package version, and deliberately no timestamps, so
re-running with identical inputs produces an identical status file.
All randomness flows from explicit seeds; nothing reads system entropy.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .chat import normalize_tokens, parse_chat, tokens_from_plain_text
from .embed import (
    SyntheticSpec,
    bind_dataset,
    generate_synthetic,
    read_feature_csv,
    write_embedding,
    write_feature_csv,
)
from .interpret import (
    collect_mean_attention,
    compare_conditions,
    emit_report,
    feature_salience,
    feature_shift_report,
)
from .manifest import LABELS, load_manifest, save_manifest
from .models import TrainConfig, evaluate, load_model, save_model, train
from .speech import DspConfig, SPEECH_FEATURE_NAMES, extract_speech_features, read_wav
from .text import TEXT_FEATURE_NAMES, TextFeatureConfig, extract_text_features
from .wer import mean_wer, wer


class CliError(Exception):
    """User-facing failure; message printed, non-zero exit."""


def _sha256(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise CliError(f"config file not found: {p}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"config is not valid JSON: {exc}") from exc


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _write_status(out_dir: Path, command: str, config: dict, inputs: list[Path],
                  outputs: list[str], seeds: list[int] | None = None) -> Path:
    status = {
        "command": command,
        "package_version": __version__,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in sorted(set(inputs))},
        "outputs": sorted(outputs),
        "seeds": seeds or [],
    }
    path = out_dir / f"status-{command}.json"
    path.write_text(json.dumps(status, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CliError(message)


def _merged(config: dict, args, keys: tuple[str, ...]) -> dict:
    merged = dict(config)
    for key in keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged[key] = value
    return merged


def _out_dir(merged: dict) -> Path:
    _require("out" in merged and merged["out"], "no output directory (--out or config 'out')")
    out = Path(merged["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _tokens_for_entry(entry, speaker: str):
    _require(
        entry.transcript_path is not None,
        f"entry {entry.sample_id!r} has no transcript_path in the manifest",
    )
    text = entry.transcript_path.read_text(encoding="utf-8")
    if entry.transcript_path.suffix == ".cha":
        return normalize_tokens(parse_chat(text, entry.sample_id), speaker)
    return tokens_from_plain_text(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_parse_chat(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "speaker", "out"))
    _require(merged.get("manifest"), "no manifest (--manifest or config 'manifest')")
    _require(merged.get("condition"), "no condition tag (--condition)")
    speaker = merged.get("speaker", "PAR")
    out = _out_dir(merged)
    manifest = load_manifest(merged["manifest"])
    entries = manifest.for_condition(merged["condition"])
    _require(bool(entries), f"manifest has no entries for condition {merged['condition']!r}")

    doc = {}
    inputs = [Path(merged["manifest"])]
    for entry in entries:
        seq = _tokens_for_entry(entry, speaker)
        inputs.append(entry.transcript_path)
        doc[entry.sample_id] = {
            "tokens": seq.tokens,
            "sentence_bounds": [list(b) for b in seq.sentence_bounds],
            "unknown_codes": seq.unknown_codes,
        }
    name = f"tokens-{_slug(merged['condition'])}.json"
    (out / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_status(out, "parse-chat", merged, inputs, [name])
    print(f"parse-chat: wrote {name} ({len(doc)} samples)")
    return 0


def _slug(tag: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in tag)


def cmd_text_feats(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "speaker", "out"))
    _require(merged.get("manifest"), "no manifest (--manifest or config 'manifest')")
    _require(merged.get("condition"), "no condition tag (--condition)")
    speaker = merged.get("speaker", "PAR")
    text_cfg = TextFeatureConfig(**merged.get("text", {}))
    out = _out_dir(merged)
    manifest = load_manifest(merged["manifest"])
    entries = manifest.for_condition(merged["condition"])
    _require(bool(entries), f"manifest has no entries for condition {merged['condition']!r}")

    rows = {}
    inputs = [Path(merged["manifest"])]
    for entry in entries:
        seq = _tokens_for_entry(entry, speaker)
        inputs.append(entry.transcript_path)
        rows[entry.sample_id] = extract_text_features(seq, config=text_cfg).values
    name = f"text-features-{_slug(merged['condition'])}.csv"
    write_feature_csv(out / name, TEXT_FEATURE_NAMES, rows)
    _write_status(out, "text-feats", merged, inputs, [name])
    print(f"text-feats: wrote {name} ({len(rows)} samples x {len(TEXT_FEATURE_NAMES)})")
    return 0


def cmd_speech_feats(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "out"))
    _require(merged.get("manifest"), "no manifest (--manifest or config 'manifest')")
    _require(merged.get("condition"), "no condition tag (--condition)")
    dsp_cfg = DspConfig(**merged.get("dsp", {}))
    out = _out_dir(merged)
    manifest = load_manifest(merged["manifest"])
    entries = manifest.for_condition(merged["condition"])
    _require(bool(entries), f"manifest has no entries for condition {merged['condition']!r}")

    rows = {}
    inputs = [Path(merged["manifest"])]
    for entry in entries:
        _require(
            entry.audio_path is not None,
            f"entry {entry.sample_id!r} has no audio_path in the manifest",
        )
        inputs.append(entry.audio_path)
        rows[entry.sample_id] = extract_speech_features(read_wav(entry.audio_path), dsp_cfg).values
    name = f"speech-features-{_slug(merged['condition'])}.csv"
    write_feature_csv(out / name, SPEECH_FEATURE_NAMES, rows)
    _write_status(out, "speech-feats", merged, inputs, [name])
    print(f"speech-feats: wrote {name} ({len(rows)} samples x {len(SPEECH_FEATURE_NAMES)})")
    return 0


def cmd_wer(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "out", "speaker"))
    merged["ref_condition"] = args.ref_condition or config.get("ref_condition")
    merged["hyp_condition"] = args.hyp_condition or config.get("hyp_condition")
    _require(merged.get("manifest"), "no manifest (--manifest or config 'manifest')")
    _require(merged.get("ref_condition"), "no reference condition (--ref-condition)")
    _require(merged.get("hyp_condition"), "no hypothesis condition (--hyp-condition)")
    speaker = merged.get("speaker", "PAR")
    out = _out_dir(merged)
    manifest = load_manifest(merged["manifest"])
    refs = {e.sample_id: e for e in manifest.for_condition(merged["ref_condition"])}
    hyps = {e.sample_id: e for e in manifest.for_condition(merged["hyp_condition"])}
    shared = sorted(set(refs) & set(hyps))
    _require(bool(shared), "no sample ids shared between the two conditions")

    lines = ["sample_id,substitutions,deletions,insertions,ref_len,wer"]
    pairs = []
    inputs = [Path(merged["manifest"])]
    for sid in shared:
        ref_seq = _tokens_for_entry(refs[sid], speaker)
        hyp_seq = _tokens_for_entry(hyps[sid], speaker)
        inputs.extend([refs[sid].transcript_path, hyps[sid].transcript_path])
        b = wer(ref_seq.tokens, hyp_seq.tokens)
        pairs.append((ref_seq.tokens, hyp_seq.tokens))
        lines.append(f"{sid},{b.substitutions},{b.deletions},{b.insertions},{b.ref_len},{b.wer!r}")
    csv_name = f"wer-{_slug(merged['ref_condition'])}-vs-{_slug(merged['hyp_condition'])}.csv"
    (out / csv_name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    summary = {
        "ref_condition": merged["ref_condition"],
        "hyp_condition": merged["hyp_condition"],
        "samples": len(shared),
        "mean_wer": mean_wer(pairs),
        "pooled_wer": mean_wer(pairs, pooled=True),
    }
    summary_name = "wer-summary.json"
    (out / summary_name).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")
    _write_status(out, "wer", merged, inputs, [csv_name, summary_name])
    print(f"wer: mean {summary['mean_wer']:.4f} over {len(shared)} samples")
    return 0


def cmd_synth_data(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("out",))
    synth = dict(config.get("synth", {}))
    if args.seed is not None:
        synth["seed"] = args.seed
    out = _out_dir(merged)
    spec = SyntheticSpec(
        train_per_class=synth.get("train_per_class", 100),
        test_per_class=synth.get("test_per_class", 24),
        m=synth.get("m", 35),
        d=synth.get("d", 1024),
        n_rows=tuple(synth.get("n_rows", (4, 8))),
        planted=tuple(synth.get("planted", (4, 11, 12))),
        effect_size=synth.get("effect_size", 2.0),
        noise_scale=synth.get("noise_scale", 1.0),
        coupling=synth.get("coupling", 1.0),
        seed=synth.get("seed", 0),
    )
    merged["synth"] = {**synth, "planted": list(spec.planted), "n_rows": list(spec.n_rows)}
    dataset = generate_synthetic(spec)

    emb_dir = out / "emb"
    emb_dir.mkdir(exist_ok=True)
    entries = []
    rows = {}
    outputs = []
    for sample in dataset.train + dataset.test:
        emb_name = f"emb/{sample.sample_id}.emb"
        write_embedding(out / emb_name, sample.embedding.astype(np.float32))
        outputs.append(emb_name)
        rows[sample.sample_id] = sample.knowledge
        entries.append({
            "sample_id": sample.sample_id,
            "label": LABELS[sample.label],
            "condition": "synth",
            "split": sample.split,
            "embedding_path": emb_name,
        })
    save_manifest(entries, out / "manifest.json")
    feature_names = TEXT_FEATURE_NAMES if spec.m == 35 else (
        SPEECH_FEATURE_NAMES if spec.m == 60 else [f"f{i:02d}" for i in range(spec.m)])
    write_feature_csv(out / "features-synth.csv", feature_names, rows)
    (out / "truth.json").write_text(json.dumps(dataset.truth, indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")
    outputs += ["manifest.json", "features-synth.csv", "truth.json"]
    _write_status(out, "synth-data", merged, [], outputs, seeds=[spec.seed])
    print(f"synth-data: {len(entries)} samples ({spec.train_per_class}x2 train, "
          f"{spec.test_per_class}x2 test), planted {list(spec.planted)}")
    return 0


def _train_config(merged: dict) -> TrainConfig:
    section = dict(merged.get("train", {}))
    section.pop("features", None)
    if "seeds" in section:
        section["seeds"] = tuple(section["seeds"])
    return TrainConfig(**section)


def _bound_dataset(merged: dict):
    _require(merged.get("manifest"), "no manifest (--manifest or config 'manifest')")
    _require(merged.get("condition"), "no condition tag (--condition)")
    features = merged.get("features") or merged.get("train", {}).get("features")
    _require(
        bool(features),
        "no feature CSV (--features): produce one with `speechcue text-feats` or "
        "`speechcue speech-feats` (or `speechcue synth-data` for synthetic runs)",
    )
    features = Path(features)
    _require(
        features.exists(),
        f"feature CSV not found: {features} — produce it with `speechcue text-feats` / "
        "`speechcue speech-feats` / `speechcue synth-data`",
    )
    manifest = load_manifest(merged["manifest"])
    bound = bind_dataset(manifest, merged["condition"], features)
    for warning in bound.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return bound, features


def cmd_train(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "out", "features"))
    seeds = _parse_seeds(args.seeds) if args.seeds else config.get("seeds", list(range(10)))
    merged["seeds"] = seeds
    out = _out_dir(merged)
    bound, features = _bound_dataset(merged)
    train_samples = bound.split("train")
    _require(bool(train_samples), "manifest has no train-split entries for this condition")
    train_cfg = _train_config(merged)

    outputs = []
    for seed in seeds:
        started = time.perf_counter()
        trained = train(train_cfg, train_samples, seed)
        ckpt_name = f"model-seed{seed}.ckpt"
        save_model(trained, out / ckpt_name)
        log_name = f"train-log-seed{seed}.jsonl"
        with open(out / log_name, "w", encoding="utf-8") as fh:
            for epoch, loss in enumerate(trained.loss_history):
                fh.write(json.dumps({
                    "epoch": epoch, "mean_loss": loss,
                    "wall_time_s": round(time.perf_counter() - started, 3),
                }) + "\n")
        outputs.append(ckpt_name)
        print(f"train: seed {seed} done, final loss "
              f"{trained.loss_history[-1] if trained.loss_history else float('nan'):.4f}")
    _write_status(out, "train", merged, [Path(merged["manifest"]), features], outputs, seeds)
    return 0


def cmd_evaluate(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "out", "features"))
    seeds = _parse_seeds(args.seeds) if args.seeds else config.get("seeds", list(range(10)))
    merged["seeds"] = seeds
    out = _out_dir(merged)
    bound, features = _bound_dataset(merged)
    test_samples = bound.split("test")
    _require(bool(test_samples), "manifest has no test-split entries for this condition")

    per_seed = []
    inputs = [Path(merged["manifest"]), features]
    for seed in seeds:
        ckpt = out / f"model-seed{seed}.ckpt"
        _require(ckpt.exists(),
                 f"checkpoint not found: {ckpt} — run `speechcue train` first")
        inputs.append(ckpt)
        trained = load_model(ckpt)
        result = evaluate(trained, test_samples)
        per_seed.append({"seed": seed, "accuracy": result.accuracy})
        print(f"evaluate: seed {seed} accuracy {result.accuracy:.4f}")
    accs = np.array([p["accuracy"] for p in per_seed])
    best = min(per_seed, key=lambda p: (-p["accuracy"], p["seed"]))["seed"]
    doc = {
        "per_seed": per_seed,
        "mean_accuracy": float(accs.mean()),
        "std_accuracy": float(accs.std()),
        "best_seed": best,
    }
    (out / "accuracies.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                                         encoding="utf-8")
    _write_status(out, "evaluate", merged, inputs, ["accuracies.json"], seeds)
    print(f"evaluate: mean {doc['mean_accuracy']:.4f} +- {doc['std_accuracy']:.4f}, "
          f"best seed {best}")
    return 0


def cmd_interpret(args) -> int:
    config = _load_config(args.config)
    merged = _merged(config, args, ("manifest", "condition", "out", "features"))
    out = _out_dir(merged)
    acc_path = out / "accuracies.json"
    _require(acc_path.exists(),
             f"{acc_path} not found — run `speechcue evaluate` first")
    best_seed = json.loads(acc_path.read_text())["best_seed"]
    ckpt = out / f"model-seed{best_seed}.ckpt"
    _require(ckpt.exists(), f"checkpoint not found: {ckpt} — run `speechcue train` first")
    bound, features = _bound_dataset(merged)
    test_samples = bound.split("test")
    _require(bool(test_samples), "manifest has no test-split entries for this condition")

    trained = load_model(ckpt)
    _require(trained.model.kind == "cross",
             "interpret needs a cross-attention checkpoint (train with model='cross')")
    mean_attn, used = collect_mean_attention(trained, test_samples)
    m = mean_attn.shape[1]
    names = TEXT_FEATURE_NAMES if m == 35 else (
        SPEECH_FEATURE_NAMES if m == 60 else tuple(f"f{i:02d}" for i in range(m)))
    salience = feature_salience(mean_attn, names)

    comparison = None
    if args.baseline_salience:
        base = Path(args.baseline_salience)
        _require(base.exists(), f"baseline salience CSV not found: {base}")
        baseline = _read_salience_csv(base, names)
        comparison = compare_conditions(salience, baseline,
                                        merged.get("condition", "run"), "baseline")
    shifts = None
    if args.shift_features_b:
        other = Path(args.shift_features_b)
        _require(other.exists(), f"comparison feature CSV not found: {other}")
        _, rows_a = read_feature_csv(features)
        _, rows_b = read_feature_csv(other)
        shifts = feature_shift_report(
            np.array(list(rows_a.values())), np.array(list(rows_b.values())), names
        )

    paths = emit_report(out, mean_attn, salience, comparison, shifts)
    summary = json.loads(paths["summary_json"].read_text())
    summary["samples"] = used
    summary["best_seed"] = best_seed
    paths["summary_json"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    inputs = [Path(merged["manifest"]), features, ckpt, acc_path]
    _write_status(out, "interpret", merged, inputs,
                  [p.name for p in paths.values()])
    print(f"interpret: best seed {best_seed}, {used} correctly predicted samples, "
          f"top feature {salience.top(1)[0][0]}")
    return 0


def _read_salience_csv(path: Path, names) -> "object":
    from .interpret import SalienceVector

    lines = path.read_text(encoding="utf-8").splitlines()
    values = []
    for line in lines[1:]:
        parts = line.split(",")
        values.append(float(parts[2]))
    return SalienceVector(values=np.array(values), feature_names=tuple(names))


# ---------------------------------------------------------------------------
# argument wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speechcue",
        description="Knowledge-feature extraction, attention classifiers and "
                    "interpretability analysis.",
    )
    parser.add_argument("--version", action="version", version=f"speechcue {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, features=False):
        p.add_argument("--config", help="JSON run-config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--manifest", help="dataset manifest JSON")
        p.add_argument("--condition", help="condition tag to process")
        if features:
            p.add_argument("--features", help="knowledge-feature CSV for this condition")

    p = sub.add_parser("parse-chat", help="normalize CHAT transcripts to token JSON")
    common(p)
    p.add_argument("--speaker", help="speaker code to keep (default PAR)")
    p.set_defaults(func=cmd_parse_chat)

    p = sub.add_parser("text-feats", help="extract the 35 text features to CSV")
    common(p)
    p.add_argument("--speaker", help="speaker code to keep (default PAR)")
    p.set_defaults(func=cmd_text_feats)

    p = sub.add_parser("speech-feats", help="extract the 60 speech features to CSV")
    common(p)
    p.set_defaults(func=cmd_speech_feats)

    p = sub.add_parser("wer", help="word error rate between two transcript conditions")
    common(p)
    p.add_argument("--ref-condition", help="reference condition tag")
    p.add_argument("--hyp-condition", help="hypothesis condition tag")
    p.add_argument("--speaker", help="speaker code to keep (default PAR)")
    p.set_defaults(func=cmd_wer)

    p = sub.add_parser("synth-data", help="generate a planted-cue synthetic dataset")
    p.add_argument("--config", help="JSON run-config file (synth section)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="override the synthetic seed")
    p.set_defaults(func=cmd_synth_data)

    p = sub.add_parser("train", help="train models across seeds")
    common(p, features=True)
    p.add_argument("--seeds", help="seed list: '0..9' or '1,2,3'")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate trained checkpoints on the test split")
    common(p, features=True)
    p.add_argument("--seeds", help="seed list: '0..9' or '1,2,3'")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("interpret", help="attention analysis of the best checkpoint")
    common(p, features=True)
    p.add_argument("--baseline-salience", help="salience CSV from another condition to compare")
    p.add_argument("--shift-features-b", help="feature CSV of a second condition for shift stats")
    p.set_defaults(func=cmd_interpret)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surfaced library errors keep their message
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
