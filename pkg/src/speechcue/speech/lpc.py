"""Autocorrelation-method linear prediction via Levinson-Durbin."""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter


def lpc_coefficients(frame: np.ndarray, order: int) -> np.ndarray:
    """Prediction polynomial [1, a1..ap] minimizing the forward error.

    Levinson-Durbin on the biased autocorrelation; returns the identity
    predictor when the frame is silent or the recursion degenerates.
    """
    x = np.asarray(frame, dtype=float)
    if order < 1 or len(x) <= order:
        raise ValueError(f"lpc order {order} invalid for frame of {len(x)} samples")
    r = np.correlate(x, x, mode="full")[len(x) - 1 : len(x) + order]
    if r[0] <= 0.0:
        return np.concatenate([[1.0], np.zeros(order)])
    a = np.zeros(order + 1)
    a[0] = 1.0
    err = r[0]
    for i in range(1, order + 1):
        acc = r[i] + a[1:i] @ r[1:i][::-1]
        k = -acc / err
        updated = a[1:i] + k * a[1:i][::-1]
        a[1:i] = updated
        a[i] = k
        err *= 1.0 - k * k
        if err <= 0.0:
            return np.concatenate([[1.0], np.zeros(order)])
    return a


def lpc_residual(signal: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Inverse-filter a signal with prediction coefficients [1, a1..ap]."""
    return lfilter(coeffs, [1.0], np.asarray(signal, dtype=float))


def preemphasize(signal: np.ndarray, alpha: float = 0.97) -> np.ndarray:
    x = np.asarray(signal, dtype=float)
    out = x.copy()
    out[1:] -= alpha * x[:-1]
    return out
