"""Dense 2-D numerics with hand-derived backward passes.

There is no computation graph: each layer the classifiers need exposes a
forward function plus a matching backward that consumes the upstream
gradient, and every backward is unit-tested against central finite
differences.  Training math runs in float64 so runs are bitwise
reproducible and checkable.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

LAYER_NORM_EPS = 1e-5


class ShapeError(ValueError):
    pass


def _as2d(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D array, got shape {a.shape}")
    return a


# ---------------------------------------------------------------------------
# parameters

@dataclass
class Param:
    value: np.ndarray
    grad: np.ndarray = field(init=False)
    m: np.ndarray = field(init=False)
    v: np.ndarray = field(init=False)
    scratch: np.ndarray = field(init=False, repr=False)  # optimizer workspace

    def __post_init__(self):
        self.value = np.asarray(self.value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.m = np.zeros_like(self.value)
        self.v = np.zeros_like(self.value)
        self.scratch = np.zeros_like(self.value)


class ParamSet:
    """Named parameters with paired gradient and AdamW moment buffers."""

    def __init__(self):
        self._params: dict[str, Param] = {}
        self.step_count = 0

    def add(self, name: str, value: np.ndarray) -> Param:
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        p = Param(value)
        self._params[name] = p
        return p

    def __getitem__(self, name: str) -> Param:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def names(self) -> list[str]:
        return list(self._params)

    def items(self) -> Iterable[tuple[str, Param]]:
        return self._params.items()

    def zero_grad(self) -> None:
        for p in self._params.values():
            p.grad[...] = 0.0

    def n_parameters(self) -> int:
        return sum(p.value.size for p in self._params.values())


# ---------------------------------------------------------------------------
# layers: forward + backward pairs

def matmul(a, b) -> np.ndarray:
    a, b = _as2d(a), _as2d(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: {a.shape} x {b.shape}")
    return a @ b


def matmul_backward(grad, a, b) -> tuple[np.ndarray, np.ndarray]:
    grad, a, b = _as2d(grad), _as2d(a), _as2d(b)
    if grad.shape != (a.shape[0], b.shape[1]):
        raise ShapeError(f"matmul_backward: grad {grad.shape} for {a.shape} x {b.shape}")
    return grad @ b.T, a.T @ grad


def transpose(x) -> np.ndarray:
    return _as2d(x).T


def transpose_backward(grad) -> np.ndarray:
    return _as2d(grad).T


def add_bias(x, bias) -> np.ndarray:
    x = _as2d(x)
    bias = np.asarray(bias, dtype=float).reshape(-1)
    if bias.shape[0] != x.shape[1]:
        raise ShapeError(f"add_bias: bias {bias.shape} for input {x.shape}")
    return x + bias


def add_bias_backward(grad) -> tuple[np.ndarray, np.ndarray]:
    grad = _as2d(grad)
    return grad, grad.sum(axis=0)


def tanh(x) -> np.ndarray:
    return np.tanh(np.asarray(x, dtype=float))


def tanh_backward(grad, out) -> np.ndarray:
    return np.asarray(grad) * (1.0 - np.asarray(out) ** 2)


def layer_norm(x, gain, offset, eps: float = LAYER_NORM_EPS):
    """Normalize each row over the last axis, then scale and shift.

    Returns (out, cache) where cache is consumed by layer_norm_backward.
    """
    x = _as2d(x)
    gain = np.asarray(gain, dtype=float).reshape(-1)
    offset = np.asarray(offset, dtype=float).reshape(-1)
    if gain.shape[0] != x.shape[1] or offset.shape[0] != x.shape[1]:
        raise ShapeError(f"layer_norm: gain/offset {gain.shape}/{offset.shape} for input {x.shape}")
    mean = x.mean(axis=1, keepdims=True)
    var = x.var(axis=1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (x - mean) * inv
    out = xhat * gain + offset
    return out, (xhat, inv, gain)


def layer_norm_backward(grad, cache) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xhat, inv, gain = cache
    grad = _as2d(grad)
    dgain = (grad * xhat).sum(axis=0)
    doffset = grad.sum(axis=0)
    dxhat = grad * gain
    n = xhat.shape[1]
    dx = inv * (dxhat - dxhat.mean(axis=1, keepdims=True)
                - xhat * (dxhat * xhat).mean(axis=1, keepdims=True))
    return dx, dgain, doffset


def softmax_rows(x) -> np.ndarray:
    x = _as2d(x)
    shifted = x - x.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_rows_backward(grad, out) -> np.ndarray:
    grad, out = _as2d(grad), _as2d(out)
    dot = (grad * out).sum(axis=1, keepdims=True)
    return out * (grad - dot)


def softmax_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    e = np.exp(x - x.max())
    return e / e.sum()


def softmax_vector_backward(grad, out) -> np.ndarray:
    grad = np.asarray(grad, dtype=float).reshape(-1)
    out = np.asarray(out, dtype=float).reshape(-1)
    return out * (grad - float(grad @ out))


def cross_entropy(logits, label: int) -> tuple[float, np.ndarray]:
    """Softmax + negative log-likelihood for a two-class logit pair.

    Returns (loss, gradient wrt logits); gradient = softmax - one_hot.
    """
    z = np.asarray(logits, dtype=float).reshape(-1)
    if z.shape[0] != 2:
        raise ShapeError(f"cross_entropy: expected 2 logits, got {z.shape[0]}")
    if label not in (0, 1):
        raise ValueError(f"cross_entropy: invalid label {label!r}")
    shifted = z - z.max()
    log_norm = np.log(np.exp(shifted).sum())
    log_probs = shifted - log_norm
    loss = -float(log_probs[label])
    grad = np.exp(log_probs)
    grad[label] -= 1.0
    return loss, grad


# ---------------------------------------------------------------------------
# optimizer

def adamw_step(
    params: ParamSet,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    weight_decay: float = 0.0,
) -> None:
    """One AdamW update over all parameters from their .grad buffers.

    Weight decay is decoupled: applied directly to the weights, never
    entering the moment estimates.
    """
    params.step_count += 1
    t = params.step_count
    bc1 = 1.0 - beta1**t
    bc2 = 1.0 - beta2**t
    for _, p in params.items():
        # in-place updates through one scratch buffer: the two projection
        # matrices are large enough that temporary allocation dominates
        buf = p.scratch
        p.m *= beta1
        np.multiply(p.grad, 1.0 - beta1, out=buf)
        p.m += buf
        p.v *= beta2
        np.multiply(p.grad, p.grad, out=buf)
        buf *= 1.0 - beta2
        p.v += buf
        # update = (lr / bc1) * m / (sqrt(v / bc2) + eps)
        np.divide(p.v, bc2, out=buf)
        np.sqrt(buf, out=buf)
        buf += eps
        np.divide(p.m, buf, out=buf)
        buf *= lr / bc1
        if weight_decay != 0.0:
            p.value *= 1.0 - lr * weight_decay
        p.value -= buf


# ---------------------------------------------------------------------------
# gradient checking

def grad_check(
    closure: Callable[[], float],
    params: ParamSet,
    eps: float = 1e-5,
    max_coords_per_param: int = 8,
    rng: np.random.Generator | None = None,
) -> float:
    """Max relative error between analytic gradients and central differences.

    The closure must be deterministic, populate .grad buffers (after a
    zero_grad) and return the scalar loss.  A sampled subset of
    coordinates per parameter is probed.
    """
    rng = rng or np.random.default_rng(np.random.Philox(0))
    params.zero_grad()
    closure()
    analytic = {name: p.grad.copy() for name, p in params.items()}

    worst = 0.0
    for name, p in params.items():
        flat = p.value.reshape(-1)
        n = flat.shape[0]
        if n <= max_coords_per_param:
            coords = np.arange(n)
        else:
            coords = rng.choice(n, size=max_coords_per_param, replace=False)
        for idx in coords:
            orig = flat[idx]
            flat[idx] = orig + eps
            loss_plus = closure()
            flat[idx] = orig - eps
            loss_minus = closure()
            flat[idx] = orig
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            ana = analytic[name].reshape(-1)[idx]
            denom = max(abs(numeric) + abs(ana), 1e-8)
            worst = max(worst, abs(numeric - ana) / denom)
    # restore gradients to the analytic state
    for name, p in params.items():
        p.grad[...] = analytic[name]
    return worst


# ---------------------------------------------------------------------------
# checkpoint container: magic, JSON index of named tensors, raw payload

_CKPT_MAGIC = b"CKP1"


class CheckpointError(Exception):
    pass


def save_checkpoint(path: str | Path, tensors: dict[str, np.ndarray], meta: dict | None = None) -> None:
    """Write named float64 matrices plus a JSON meta block, byte-stable."""
    index = []
    payload = bytearray()
    for name in sorted(tensors):
        arr = np.ascontiguousarray(np.asarray(tensors[name], dtype=np.float64))
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise CheckpointError(f"tensor {name!r} must be 1-D or 2-D")
        index.append(
            {"name": name, "rows": int(arr.shape[0]), "cols": int(arr.shape[1]),
             "offset": len(payload)}
        )
        payload.extend(arr.astype("<f8").tobytes())
    header = json.dumps(
        {"tensors": index, "meta": meta or {}}, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_CKPT_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(bytes(payload))


def load_checkpoint(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    raw = Path(path).read_bytes()
    if raw[:4] != _CKPT_MAGIC:
        raise CheckpointError(f"{path}: bad checkpoint magic {raw[:4]!r}")
    (header_len,) = struct.unpack("<I", raw[4:8])
    header = json.loads(raw[8 : 8 + header_len].decode("utf-8"))
    payload = raw[8 + header_len :]
    tensors: dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        rows, cols, offset = entry["rows"], entry["cols"], entry["offset"]
        nbytes = rows * cols * 8
        chunk = payload[offset : offset + nbytes]
        if len(chunk) != nbytes:
            raise CheckpointError(f"{path}: truncated tensor {entry['name']!r}")
        tensors[entry["name"]] = np.frombuffer(chunk, dtype="<f8").reshape(rows, cols).copy()
    return tensors, header["meta"]
