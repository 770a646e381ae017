"""Glottal source analysis: GCI detection and voice-quality descriptors.

GCIs are located at dominant negative peaks of the LPC residual inside
voiced regions, with at most one detection per 0.7 local pitch periods
(greedy selection by peak depth).  The glottal flow is estimated with a
simplified iterative adaptive inverse filtering pass per 200 ms voiced
chunk: a 1st-order LPC removes the source tilt estimate, a full-order
LPC on that output models the vocal tract, the original chunk is inverse
filtered by the tract model, and the result integrates to the flow.  The
pipeline targets descriptor-definition parity validated on synthetic
pulses, not numeric parity with any external toolkit.

Per glottal cycle: NAQ = peak-to-peak flow / (|min flow derivative| *
period); OQ = fraction of the cycle above 10% of the cycle's flow range;
HRF = (sum of harmonic amplitudes 2..10) / H1 in dB from the
cycle-synchronous spectrum.  Per chunk: GCI-interval variability
(std/mean), NAQ average/variability, OQ average/variability, HRF
average/variability; the 14 outputs are the mean and std of each
descriptor across chunks.
"""

from __future__ import annotations

import numpy as np

from .audio import AudioBuffer, DspConfig
from .lpc import lpc_coefficients, lpc_residual, preemphasize
from .pitch import F0Contour
from ..stats import pop_std

GLOTTAL_DESCRIPTOR_NAMES = (
    "gci_interval_variability",
    "naq_average",
    "naq_variability",
    "oq_average",
    "oq_variability",
    "hrf_average",
    "hrf_variability",
)


def detect_gci(
    audio: AudioBuffer, contour: F0Contour, config: DspConfig = DspConfig()
) -> np.ndarray:
    """Glottal closure instants (seconds), empty when nothing is voiced."""
    sr = audio.sample_rate
    hop = config.hop_len(sr)
    frame_len = config.frame_len(sr)
    times: list[float] = []
    for f_start, f_end in _voiced_runs(contour.voiced):
        s_start = f_start * hop
        s_end = min((f_end - 1) * hop + frame_len, len(audio.samples))
        segment = audio.samples[s_start:s_end]
        if len(segment) < frame_len:
            continue
        residual = _lpc_residual_blocked(segment, sr, config.glottal_chunk_s)
        local_f0 = contour.f0[f_start:f_end]
        period = sr / float(np.mean(local_f0[local_f0 > 0])) if np.any(local_f0 > 0) else sr / 150.0
        picks = _pick_negative_peaks(residual, period)
        for pos in _refine_to_lobe_centroid(residual, picks, period):
            times.append((s_start + pos) / sr)
    # voiced runs overlap by frame_len - hop samples; collapse duplicates
    min_spacing = 0.7 / config.f0_max
    deduped: list[float] = []
    for t in sorted(times):
        if not deduped or t - deduped[-1] >= min_spacing:
            deduped.append(t)
    return np.asarray(deduped)


def _refine_to_lobe_centroid(
    residual: np.ndarray, picks: np.ndarray, period_samples: float
) -> np.ndarray:
    """Sub-sample GCI positions: center of mass of the squared negative
    residual around each pick.  The excitation often whitens into a pair
    of adjacent negative lobes whose relative depth flips from cycle to
    cycle; the lobe centroid is stable where the deepest-sample location
    is not."""
    window = max(2, int(0.3 * period_samples))
    refined = np.empty(len(picks))
    for k, p in enumerate(picks):
        lo, hi = max(0, p - window), min(len(residual), p + window + 1)
        seg = residual[lo:hi]
        weights = np.where(seg < 0.0, seg * seg, 0.0)
        total = float(weights.sum())
        if total <= 0.0:
            refined[k] = float(p)
            continue
        refined[k] = lo + float(np.arange(len(seg)) @ weights) / total
    return refined


def _lpc_residual_blocked(samples: np.ndarray, sr: int, block_s: float) -> np.ndarray:
    """Inverse filter with per-block LPC; each block is filtered with
    ``order`` samples of left context so no warm-up transient leaks in."""
    order = 2 + sr // 1000
    pre = preemphasize(samples)
    res = np.zeros_like(pre)
    block = max(int(block_s * sr), order + 3)
    for start in range(0, len(pre), block):
        end = min(start + block, len(pre))
        if end - start <= order + 2:
            continue  # tail shorter than the model order stays zero
        ctx = max(0, start - order)
        coeffs = lpc_coefficients(pre[start:end] * np.hamming(end - start), order)
        seg_res = lpc_residual(pre[ctx:end], coeffs)
        res[start:end] = seg_res[start - ctx :]
    res[: order + 1] = 0.0
    return res


def _voiced_runs(voiced: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, flag in enumerate(voiced):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(voiced)))
    return runs


def _pick_negative_peaks(residual: np.ndarray, period_samples: float) -> np.ndarray:
    """Greedy deepest-first selection with a 0.7-period exclusion radius.

    The depth gate is relative to the typical genuine peak (median of the
    expected-count deepest candidates) so a single boundary or transient
    outlier cannot mask the real excitation peaks.
    """
    r = np.asarray(residual)
    if len(r) < 3:
        return np.array([], dtype=int)
    is_min = (r[1:-1] < r[:-2]) & (r[1:-1] <= r[2:])
    candidates = np.flatnonzero(is_min) + 1
    candidates = candidates[r[candidates] < 0.0]
    if candidates.size == 0:
        return np.array([], dtype=int)
    depths = r[candidates]
    n_expected = max(1, int(len(r) / max(period_samples, 1.0)))
    deepest = np.sort(depths)[: min(n_expected, depths.size)]
    reference = float(np.median(deepest))
    keep = depths <= 0.3 * reference
    candidates = candidates[keep]
    if candidates.size == 0:
        return np.array([], dtype=int)
    order = candidates[np.argsort(r[candidates], kind="stable")]
    radius = 0.7 * period_samples
    accepted: list[int] = []
    for idx in order:
        if all(abs(idx - a) >= radius for a in accepted):
            accepted.append(int(idx))
    return np.asarray(sorted(accepted), dtype=int)


def estimate_glottal_flow(segment: np.ndarray, sr: int) -> tuple[np.ndarray, np.ndarray]:
    """Simplified IAIF: returns (flow, flow_derivative) for one chunk."""
    x = np.asarray(segment, dtype=float)
    x = x - x.mean()
    order = 2 + sr // 1000
    window = np.hamming(len(x))
    # stage 1: remove a first-order source-tilt estimate
    g1 = lpc_coefficients(x * window, 1)
    y1 = lpc_residual(x, g1)
    # stage 2: vocal tract model on the de-tilted signal, inverse filter original
    vt = lpc_coefficients(y1 * window, order)
    derivative = lpc_residual(x, vt)
    flow = np.cumsum(derivative) / sr
    flow = flow - _linear_trend(flow)
    return flow, derivative


def _linear_trend(x: np.ndarray) -> np.ndarray:
    t = np.arange(len(x), dtype=float)
    coeffs = np.polyfit(t, x, 1)
    return np.polyval(coeffs, t)


def glottal_descriptors(
    audio: AudioBuffer,
    gci_times: np.ndarray,
    config: DspConfig = DspConfig(),
    diagnostics: list[str] | None = None,
) -> tuple[float, ...]:
    """The 14 glottal features (mean and std per descriptor, interleaved
    in canonical order); zeros with a diagnostic below 3 GCIs."""
    if len(gci_times) < 3:
        if diagnostics is not None:
            diagnostics.append("glottal_descriptors: fewer than 3 GCIs; zeros")
        return (0.0,) * 14
    sr = audio.sample_rate
    gci = np.asarray(np.round(np.asarray(gci_times) * sr), dtype=int)
    chunk_len = int(config.glottal_chunk_s * sr)

    per_chunk: list[tuple[float, float, float, float, float, float, float]] = []
    for start in range(0, len(audio.samples) - chunk_len + 1, chunk_len):
        end = start + chunk_len
        local = gci[(gci >= start) & (gci < end)] - start
        if len(local) < 3:
            continue
        flow, derivative = estimate_glottal_flow(audio.samples[start:end], sr)
        intervals = np.diff(local) / sr
        naq_vals, oq_vals, hrf_vals = [], [], []
        for a, b in zip(local[:-1], local[1:]):
            cycle_flow = flow[a:b]
            cycle_deriv = derivative[a:b]
            if len(cycle_flow) < 8:
                continue
            t_period = (b - a) / sr
            f_range = float(cycle_flow.max() - cycle_flow.min())
            d_peak = float(np.abs(cycle_deriv.min()))
            if f_range <= 0.0 or d_peak <= 0.0:
                continue
            naq_vals.append(f_range / (d_peak * t_period))
            open_mask = cycle_flow > (cycle_flow.min() + 0.1 * f_range)
            oq_vals.append(float(np.mean(open_mask)))
            hrf = _cycle_hrf_db(cycle_flow)
            if hrf is not None:
                hrf_vals.append(hrf)
        if not naq_vals:
            continue
        mean_interval = float(np.mean(intervals))
        gci_var = pop_std(intervals) / mean_interval if mean_interval > 0 else 0.0
        per_chunk.append(
            (
                gci_var,
                float(np.mean(naq_vals)),
                pop_std(naq_vals),
                float(np.mean(oq_vals)),
                pop_std(oq_vals),
                float(np.mean(hrf_vals)) if hrf_vals else 0.0,
                pop_std(hrf_vals) if hrf_vals else 0.0,
            )
        )
    if not per_chunk:
        if diagnostics is not None:
            diagnostics.append("glottal_descriptors: no analyzable 200 ms chunk; zeros")
        return (0.0,) * 14
    stacked = np.asarray(per_chunk)
    out: list[float] = []
    for col in range(stacked.shape[1]):
        out.append(float(np.mean(stacked[:, col])))
        out.append(pop_std(stacked[:, col]))
    return tuple(out)


def _cycle_hrf_db(cycle_flow: np.ndarray) -> float | None:
    """Harmonic richness factor of one cycle-synchronous spectrum."""
    spectrum = np.abs(np.fft.rfft(cycle_flow - cycle_flow.mean()))
    if len(spectrum) < 3:
        return None
    h1 = float(spectrum[1])
    if h1 <= 0.0:
        return None
    top = min(10, len(spectrum) - 1)
    harmonics = float(np.sum(spectrum[2 : top + 1]))
    if harmonics <= 0.0:
        return None
    return 20.0 * float(np.log10(harmonics / h1))
