"""Attention-score interpretability analysis.

Attention matrices are gathered from correctly predicted test samples
only, averaged element-wise, reduced to per-feature salience by summing
across the embedding dimension and normalizing to the probability
simplex, and compared across conditions.  Group-level feature shifts are
quantified with a two-sided Mann-Whitney rank test plus Cliff's delta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .embed import Sample
from .models import TrainedModel
from .stats import cliffs_delta, mann_whitney_u


@dataclass
class SalienceVector:
    values: np.ndarray          # (m,), non-negative, sums to 1
    feature_names: tuple[str, ...]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("salience must be a vector")
        if len(self.feature_names) != self.values.shape[0]:
            raise ValueError("feature names must match salience length")
        if np.any(self.values < 0) or abs(self.values.sum() - 1.0) > 1e-9:
            raise ValueError("salience must be non-negative and sum to 1")

    def top(self, k: int) -> list[tuple[str, int, float]]:
        order = np.argsort(-self.values, kind="stable")[:k]
        return [(self.feature_names[i], int(i), float(self.values[i])) for i in order]


@dataclass
class ConditionComparison:
    label_a: str
    label_b: str
    salience_a: np.ndarray
    salience_b: np.ndarray
    difference: np.ndarray      # a - b
    ranked: list[tuple[str, int, float]]  # by descending difference
    feature_names: tuple[str, ...]

    def top(self, k: int) -> list[tuple[str, int, float]]:
        return self.ranked[:k]


def collect_mean_attention(
    trained: TrainedModel, test_samples: Sequence[Sample]
) -> tuple[np.ndarray, int]:
    """Element-wise mean of A over correctly predicted samples.

    Raises ValueError when nothing is predicted correctly (there is then
    nothing to interpret).
    """
    if not test_samples:
        raise ValueError("collect_mean_attention: empty test set")
    total = None
    used = 0
    for s in test_samples:
        logits = trained.logits_for(s)
        if int(np.argmax(logits)) != s.label:
            continue
        attn = trained.attention_for(s)
        total = attn.copy() if total is None else total + attn
        used += 1
    if used == 0:
        raise ValueError("collect_mean_attention: no correctly predicted samples")
    return total / used, used


def feature_salience(mean_attention: np.ndarray, feature_names: Sequence[str] | None = None) -> SalienceVector:
    """Column sums of the averaged attention matrix, normalized to sum 1."""
    a = np.asarray(mean_attention, dtype=float)
    if a.ndim != 2:
        raise ValueError("mean attention must be a matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("mean attention contains non-finite values")
    sums = a.sum(axis=0)
    total = sums.sum()
    if total <= 0:
        raise ValueError("attention mass must be positive")
    names = tuple(feature_names) if feature_names else tuple(f"f{i:02d}" for i in range(a.shape[1]))
    return SalienceVector(values=sums / total, feature_names=names)


def compare_conditions(
    salience_a: SalienceVector,
    salience_b: SalienceVector,
    label_a: str = "condition_a",
    label_b: str = "condition_b",
) -> ConditionComparison:
    """Per-feature salience difference a - b, ranked descending."""
    if salience_a.values.shape != salience_b.values.shape:
        raise ValueError(
            f"salience lengths differ: {salience_a.values.shape} vs {salience_b.values.shape}"
        )
    diff = salience_a.values - salience_b.values
    order = np.argsort(-diff, kind="stable")
    names = salience_a.feature_names
    ranked = [(names[i], int(i), float(diff[i])) for i in order]
    return ConditionComparison(
        label_a=label_a,
        label_b=label_b,
        salience_a=salience_a.values.copy(),
        salience_b=salience_b.values.copy(),
        difference=diff,
        ranked=ranked,
        feature_names=names,
    )


@dataclass
class FeatureShift:
    name: str
    index: int
    mean_a: float
    mean_b: float
    u_statistic: float
    z: float
    p_value: float
    cliffs_delta: float
    all_tied: bool


def feature_shift_report(
    features_a: np.ndarray,
    features_b: np.ndarray,
    feature_names: Sequence[str] | None = None,
) -> list[FeatureShift]:
    """Per-feature group comparison: means, Mann-Whitney U (two-sided,
    normal approximation, tie-corrected) and Cliff's delta."""
    a = np.atleast_2d(np.asarray(features_a, dtype=float))
    b = np.atleast_2d(np.asarray(features_b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"feature widths differ: {a.shape[1]} vs {b.shape[1]}")
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise ValueError("feature_shift_report: need at least 2 samples per side")
    names = tuple(feature_names) if feature_names else tuple(f"f{i:02d}" for i in range(a.shape[1]))
    report = []
    for j in range(a.shape[1]):
        mw = mann_whitney_u(a[:, j], b[:, j])
        report.append(
            FeatureShift(
                name=names[j],
                index=j,
                mean_a=float(a[:, j].mean()),
                mean_b=float(b[:, j].mean()),
                u_statistic=mw.u,
                z=mw.z,
                p_value=mw.p_value,
                cliffs_delta=cliffs_delta(a[:, j], b[:, j]),
                all_tied=mw.all_tied,
            )
        )
    return report


# ---------------------------------------------------------------------------
# report emission: CSV grids, internally rendered SVG, JSON summary

def emit_report(
    out_dir: str | Path,
    mean_attention: np.ndarray,
    salience: SalienceVector,
    comparison: ConditionComparison | None = None,
    shifts: list[FeatureShift] | None = None,
    top_k: int = 10,
    svg_max_rows: int = 128,
) -> dict[str, Path]:
    """Write heatmap CSV/SVG, salience line CSV/SVG and a JSON summary.

    Output is byte-deterministic for identical inputs.  The SVG heatmap
    bins embedding rows down to at most ``svg_max_rows`` row groups; the
    CSV always carries the full grid.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    heat_csv = out / "attention_heatmap.csv"
    _write_heatmap_csv(heat_csv, mean_attention, salience.feature_names)
    paths["heatmap_csv"] = heat_csv

    heat_svg = out / "attention_heatmap.svg"
    heat_svg.write_text(_render_heatmap_svg(mean_attention, svg_max_rows), encoding="utf-8")
    paths["heatmap_svg"] = heat_svg

    line_csv = out / "salience.csv"
    _write_salience_csv(line_csv, salience, comparison)
    paths["salience_csv"] = line_csv

    line_svg = out / "salience.svg"
    line_svg.write_text(_render_salience_svg(salience, comparison), encoding="utf-8")
    paths["salience_svg"] = line_svg

    summary = {
        "samples": None,
        "top_salience": [
            {"feature": n, "index": i, "salience": v} for n, i, v in salience.top(top_k)
        ],
    }
    if comparison is not None:
        summary["comparison"] = {
            "a": comparison.label_a,
            "b": comparison.label_b,
            "top_difference": [
                {"feature": n, "index": i, "difference": v} for n, i, v in comparison.top(top_k)
            ],
        }
    if shifts is not None:
        summary["feature_shifts"] = [
            {
                "feature": s.name,
                "index": s.index,
                "mean_a": s.mean_a,
                "mean_b": s.mean_b,
                "u": s.u_statistic,
                "z": s.z,
                "p_value": s.p_value,
                "cliffs_delta": s.cliffs_delta,
                "all_tied": s.all_tied,
            }
            for s in shifts
        ]
    summary_path = out / "summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    paths["summary_json"] = summary_path
    return paths


def _write_heatmap_csv(path: Path, matrix: np.ndarray, names: Sequence[str]) -> None:
    a = np.asarray(matrix, dtype=float)
    lines = ["embedding_dim," + ",".join(names)]
    for i in range(a.shape[0]):
        lines.append(str(i) + "," + ",".join(repr(float(v)) for v in a[i]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_salience_csv(path: Path, salience: SalienceVector, comparison: ConditionComparison | None) -> None:
    if comparison is None:
        lines = ["index,feature,salience"]
        for i, name in enumerate(salience.feature_names):
            lines.append(f"{i},{name},{salience.values[i]!r}")
    else:
        lines = [f"index,feature,salience_{comparison.label_a},salience_{comparison.label_b},difference"]
        for i, name in enumerate(salience.feature_names):
            lines.append(
                f"{i},{name},{comparison.salience_a[i]!r},"
                f"{comparison.salience_b[i]!r},{comparison.difference[i]!r}"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _bin_rows(a: np.ndarray, max_rows: int) -> np.ndarray:
    if a.shape[0] <= max_rows:
        return a
    edges = np.linspace(0, a.shape[0], max_rows + 1).astype(int)
    return np.stack([a[edges[i] : edges[i + 1]].mean(axis=0) for i in range(max_rows)])


def _shade(value: float, lo: float, hi: float) -> str:
    t = 0.0 if hi <= lo else (value - lo) / (hi - lo)
    # white -> dark blue ramp
    r = int(round(255 * (1.0 - 0.85 * t)))
    g = int(round(255 * (1.0 - 0.70 * t)))
    b = 255
    return f"#{r:02x}{g:02x}{b:02x}"

def _render_heatmap_svg(matrix: np.ndarray, max_rows: int) -> str:
    a = _bin_rows(np.asarray(matrix, dtype=float), max_rows)
    rows, cols = a.shape
    cell_w, cell_h = 8, 3
    width, height = cols * cell_w + 60, rows * cell_h + 40
    lo, hi = float(a.min()), float(a.max())
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<text x="10" y="16" font-size="12">attention (rows: embedding dims, cols: features)</text>',
    ]
    for i in range(rows):
        for j in range(cols):
            parts.append(
                f'<rect x="{40 + j * cell_w}" y="{24 + i * cell_h}" width="{cell_w}" '
                f'height="{cell_h}" fill="{_shade(a[i, j], lo, hi)}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_salience_svg(salience: SalienceVector, comparison: ConditionComparison | None) -> str:
    m = salience.values.shape[0]
    width, height = max(360, 14 * m + 80), 260
    x0, y0, plot_w, plot_h = 50, 20, width - 90, height - 70
    series = [("salience", salience.values, "#1f6fb2")]
    if comparison is not None:
        series = [
            (comparison.label_a, comparison.salience_a, "#1f6fb2"),
            (comparison.label_b, comparison.salience_b, "#2ca05a"),
        ]
    peak = max(float(np.max(vals)) for _, vals, _ in series)
    peak = peak if peak > 0 else 1.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{x0}" y1="{y0 + plot_h}" x2="{x0 + plot_w}" y2="{y0 + plot_h}" stroke="#333"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y0 + plot_h}" stroke="#333"/>',
    ]
    for label, vals, color in series:
        points = []
        for i, v in enumerate(vals):
            x = x0 + (plot_w * i / max(m - 1, 1))
            y = y0 + plot_h * (1.0 - float(v) / peak)
            points.append(f"{x:.2f},{y:.2f}")
        parts.append(f'<polyline fill="none" stroke="{color}" points="{" ".join(points)}"/>')
    for k, (label, _, color) in enumerate(series):
        parts.append(
            f'<text x="{x0 + 6}" y="{y0 + 14 + 14 * k}" font-size="11" fill="{color}">{label}</text>'
        )
    parts.append(
        f'<text x="{x0}" y="{height - 28}" font-size="11">feature index 0..{m - 1}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
