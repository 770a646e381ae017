import json
from pathlib import Path

import pytest

from speechcue.cli import main


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def _chat_manifest(tmp_path: Path) -> Path:
    (tmp_path / "s1.cha").write_text(
        "@Begin\n*PAR: &-uh the boy is taking cookies . 0_2100\n*PAR: the stool falls .\n@End\n"
    )
    (tmp_path / "s2.cha").write_text(
        "*INV: what else ?\n*PAR: water is running running over .\n"
    )
    (tmp_path / "h1.txt").write_text("the boy is taking cookies the stool falls\n")
    (tmp_path / "h2.txt").write_text("water is running over\n")
    entries = [
        {"sample_id": "s1", "label": "AD", "condition": "manual", "split": "train",
         "transcript_path": "s1.cha"},
        {"sample_id": "s2", "label": "HC", "condition": "manual", "split": "test",
         "transcript_path": "s2.cha"},
        {"sample_id": "s1", "label": "AD", "condition": "asr:toy", "split": "train",
         "transcript_path": "h1.txt"},
        {"sample_id": "s2", "label": "HC", "condition": "asr:toy", "split": "test",
         "transcript_path": "h2.txt"},
    ]
    return _write(tmp_path / "manifest.json", json.dumps({"entries": entries}))


def test_parse_chat_command(tmp_path, capsys):
    manifest = _chat_manifest(tmp_path)
    out = tmp_path / "out"
    code = main(["parse-chat", "--manifest", str(manifest), "--condition", "manual",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "tokens-manual.json").read_text())
    assert doc["s1"]["tokens"][0] == "uh"
    assert len(doc["s1"]["sentence_bounds"]) == 2
    status = json.loads((out / "status-parse-chat.json").read_text())
    assert status["command"] == "parse-chat"
    assert status["inputs"]


def test_text_feats_command(tmp_path):
    manifest = _chat_manifest(tmp_path)
    out = tmp_path / "out"
    code = main(["text-feats", "--manifest", str(manifest), "--condition", "manual",
                 "--out", str(out)])
    assert code == 0
    lines = (out / "text-features-manual.csv").read_text().splitlines()
    assert lines[0].startswith("sample_id,ttr,")
    assert len(lines) == 3


def test_wer_command(tmp_path):
    manifest = _chat_manifest(tmp_path)
    out = tmp_path / "out"
    code = main(["wer", "--manifest", str(manifest), "--ref-condition", "manual",
                 "--hyp-condition", "asr:toy", "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "wer-summary.json").read_text())
    assert summary["samples"] == 2
    # s1 hyp drops "uh" (D=1, ref 9 words): 1/9; s2 hyp drops one "running": 1/5
    assert summary["mean_wer"] == pytest.approx(0.5 * (1 / 9 + 1 / 5))


def test_missing_prerequisite_names_producer(tmp_path, capsys):
    manifest = _chat_manifest(tmp_path)
    out = tmp_path / "out"
    code = main(["train", "--manifest", str(manifest), "--condition", "manual",
                 "--out", str(out), "--seeds", "0", "--features",
                 str(tmp_path / "nothere.csv")])
    assert code == 2
    err = capsys.readouterr().err
    assert "text-feats" in err or "speech-feats" in err


def test_unknown_condition_fails(tmp_path):
    manifest = _chat_manifest(tmp_path)
    code = main(["parse-chat", "--manifest", str(manifest), "--condition", "nope",
                 "--out", str(tmp_path / "o")])
    assert code == 2


SYNTH_CONFIG = {
    "synth": {
        "train_per_class": 12,
        "test_per_class": 6,
        "m": 6,
        "d": 16,
        "n_rows": [2, 5],
        "planted": [1, 4],
        "effect_size": 2.5,
        "seed": 3,
    },
    "train": {
        "epochs": 6,
        "batch_size": 8,
        "model": "cross",
        "pool_hidden": 4,
    },
}


def _run_synth_pipeline(tmp_path: Path, seeds: str = "0,1"):
    tmp_path.mkdir(parents=True, exist_ok=True)
    out = tmp_path / "run"
    config = _write(tmp_path / "config.json", json.dumps(SYNTH_CONFIG))
    assert main(["synth-data", "--config", str(config), "--out", str(out)]) == 0
    base = ["--config", str(config), "--manifest", str(out / "manifest.json"),
            "--condition", "synth", "--features", str(out / "features-synth.csv"),
            "--out", str(out)]
    assert main(["train", *base, "--seeds", seeds]) == 0
    assert main(["evaluate", *base, "--seeds", seeds]) == 0
    assert main(["interpret", *base]) == 0
    return out


def test_full_synthetic_pipeline(tmp_path):
    out = _run_synth_pipeline(tmp_path)
    assert (out / "manifest.json").exists()
    assert (out / "truth.json").exists()
    assert (out / "model-seed0.ckpt").exists()
    assert (out / "train-log-seed0.jsonl").exists()
    accs = json.loads((out / "accuracies.json").read_text())
    assert len(accs["per_seed"]) == 2
    assert (out / "salience.csv").exists()
    assert (out / "attention_heatmap.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["samples"] >= 1
    assert summary["best_seed"] == accs["best_seed"]
    log_line = json.loads((out / "train-log-seed0.jsonl").read_text().splitlines()[0])
    assert set(log_line) == {"epoch", "mean_loss", "wall_time_s"}


def test_pipeline_rerun_reproducible(tmp_path):
    out1 = _run_synth_pipeline(tmp_path / "a")
    out2 = _run_synth_pipeline(tmp_path / "b")
    # checkpoints bitwise identical across reruns
    assert (out1 / "model-seed0.ckpt").read_bytes() == (out2 / "model-seed0.ckpt").read_bytes()
    assert (out1 / "accuracies.json").read_text() == (out2 / "accuracies.json").read_text()


def test_status_hashes_reproducible(tmp_path):
    config = _write(tmp_path / "config.json", json.dumps(SYNTH_CONFIG))
    out = tmp_path / "run"
    assert main(["synth-data", "--config", str(config), "--out", str(out)]) == 0
    first = (out / "status-synth-data.json").read_bytes()
    assert main(["synth-data", "--config", str(config), "--out", str(out)]) == 0
    assert (out / "status-synth-data.json").read_bytes() == first


def test_evaluate_without_checkpoints_names_train(tmp_path, capsys):
    out = tmp_path / "run"
    config = _write(tmp_path / "config.json", json.dumps(SYNTH_CONFIG))
    assert main(["synth-data", "--config", str(config), "--out", str(out)]) == 0
    code = main(["evaluate", "--config", str(config), "--manifest", str(out / "manifest.json"),
                 "--condition", "synth", "--features", str(out / "features-synth.csv"),
                 "--out", str(out), "--seeds", "0"])
    assert code == 2
    assert "train" in capsys.readouterr().err


def test_interpret_without_evaluate_names_evaluate(tmp_path, capsys):
    out = tmp_path / "run"
    config = _write(tmp_path / "config.json", json.dumps(SYNTH_CONFIG))
    assert main(["synth-data", "--config", str(config), "--out", str(out)]) == 0
    code = main(["interpret", "--config", str(config), "--manifest", str(out / "manifest.json"),
                 "--condition", "synth", "--features", str(out / "features-synth.csv"),
                 "--out", str(out)])
    assert code == 2
    assert "evaluate" in capsys.readouterr().err


def test_seed_range_syntax(tmp_path):
    from speechcue.cli import _parse_seeds
    assert _parse_seeds("1..4") == [1, 2, 3, 4]
    assert _parse_seeds("0,5,9") == [0, 5, 9]
