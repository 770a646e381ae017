"""The two classifiers: a self-attention baseline and the cross-attention
interpretability model, plus the training and evaluation protocol.

The cross-attention model fuses a pre-trained embedding matrix X (n x d)
with a knowledge vector k (m,): the knowledge vector, row-repeated n
times, serves directly as the keys (the key projection is fixed to the
identity and never learned), Q = X Wq and V = X Wv are learned
projections, and

    A = softmax_rows(Qt K / sqrt(m))   (d x m, every row sums to 1)
    Y = V A                            (n x m)

Y is pooled over time by attentive statistics pooling (learned softmax
weights; weighted mean and std) and classified by a linear layer.  A is
returned for interpretability.

Training: AdamW (lr 4e-4, weight decay 1e-5), cross-entropy, 50 epochs,
batches of 16 processed sample-by-sample with gradient averaging (no
padding; n varies per sample), fully deterministic per seed.  Knowledge
vectors are z-scored with train-split statistics; the fitted standardizer
travels with the model so evaluation reuses the train statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import nn
from .embed import Sample

LABEL_NAMES = ("AD", "HC")


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 4e-4
    weight_decay: float = 1e-5
    epochs: int = 50
    batch_size: int = 16
    seeds: tuple[int, ...] = tuple(range(10))
    hidden: int = 128        # self-attention model width
    pool_hidden: int = 64    # attentive-pooling score width
    model: str = "cross"     # "cross" | "self"
    input_kind: str = "embedding"  # self model input: "embedding" | "knowledge"

    def validate(self) -> None:
        if self.lr <= 0 or self.weight_decay < 0:
            raise ValueError("lr must be positive and weight_decay non-negative")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")
        if not self.seeds:
            raise ValueError("seed list must be non-empty")
        if self.model not in ("cross", "self"):
            raise ValueError(f"unknown model kind {self.model!r}")
        if self.input_kind not in ("embedding", "knowledge"):
            raise ValueError(f"unknown input kind {self.input_kind!r}")


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, vectors: Sequence[np.ndarray]) -> "Standardizer":
        stacked = np.asarray(list(vectors), dtype=float)
        mean = stacked.mean(axis=0)
        std = stacked.std(axis=0)
        std = np.where(std == 0.0, 1.0, std)
        return cls(mean=mean, std=std)

    @classmethod
    def identity(cls, m: int) -> "Standardizer":
        return cls(mean=np.zeros(m), std=np.ones(m))

    def transform(self, vector: np.ndarray) -> np.ndarray:
        return (np.asarray(vector, dtype=float) - self.mean) / self.std


def _uniform_init(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


# ---------------------------------------------------------------------------
# attentive temporal pooling (shared by both models)

def attentive_pool(y: np.ndarray, w: np.ndarray, b: np.ndarray, u: np.ndarray):
    """Learned softmax weighting over time frames.

    Scores e_t = u . tanh(W y_t + b); weights alpha = softmax(e); output
    concatenates the weighted mean and the weighted std (variance floored
    at 0 before the square root).  Returns (stats, cache).
    """
    y = nn._as2d(y)
    z = nn.tanh(y @ w.T + b)
    e = z @ u
    alpha = nn.softmax_vector(e)
    mu = y.T @ alpha
    dev = y - mu
    var = (dev * dev).T @ alpha
    var = np.maximum(var, 0.0)
    sd = np.sqrt(var)
    stats = np.concatenate([mu, sd])
    return stats, (y, z, alpha, mu, dev, var, sd, w, u)


def attentive_pool_backward(dstats: np.ndarray, cache):
    """Returns (dy, dw, db, du)."""
    y, z, alpha, mu, dev, var, sd, w, u = cache
    k = y.shape[1]
    dmu = dstats[:k].copy()
    dsd = dstats[k:]
    dvar = np.where(var > 0.0, dsd * 0.5 / np.where(sd == 0.0, 1.0, sd), 0.0)

    ddev = 2.0 * alpha[:, None] * dev * dvar[None, :]
    dalpha = (dev * dev) @ dvar
    dy = ddev.copy()
    dmu -= ddev.sum(axis=0)

    dy += alpha[:, None] * dmu[None, :]
    dalpha += y @ dmu

    de = nn.softmax_vector_backward(dalpha, alpha)
    du = z.T @ de
    dz = np.outer(de, u)
    dpre = dz * (1.0 - z * z)
    dw = dpre.T @ y
    db = dpre.sum(axis=0)
    dy += dpre @ w
    return dy, dw, db, du


# ---------------------------------------------------------------------------
# cross-attention interpretability model

class CrossAttentionModel:
    """Eq.-style fusion with identity key projection; exposes A (d x m)."""

    kind = "cross"

    def __init__(
        self,
        m: int,
        d: int = 1024,
        pool_hidden: int = 64,
        rng: np.random.Generator | None = None,
    ):
        self.m = m
        self.d = d
        self.pool_hidden = pool_hidden
        rng = rng or np.random.default_rng(np.random.Philox(0))
        ps = nn.ParamSet()
        ps.add("att.wq", _uniform_init(rng, (d, d), d))
        ps.add("att.wv", _uniform_init(rng, (d, d), d))
        ps.add("pool.w", _uniform_init(rng, (pool_hidden, m), m))
        ps.add("pool.b", np.zeros(pool_hidden))
        ps.add("pool.u", _uniform_init(rng, (pool_hidden,), pool_hidden))
        ps.add("cls.w", _uniform_init(rng, (2 * m, 2), 2 * m))
        ps.add("cls.b", np.zeros(2))
        self.params = ps

    def forward(self, x_emb: np.ndarray, x_kno: np.ndarray, want_cache: bool = False):
        """Returns (logits, A, Y[, cache])."""
        x_emb = nn._as2d(x_emb)
        q = nn.matmul(x_emb, self.params["att.wq"].value)
        v = nn.matmul(x_emb, self.params["att.wv"].value)
        return self.forward_parts(x_emb, x_kno, q, v, want_cache)

    def forward_parts(self, x_emb, x_kno, q, v, want_cache: bool = False):
        x_kno = np.asarray(x_kno, dtype=float).reshape(-1)
        if x_kno.shape[0] != self.m:
            raise nn.ShapeError(
                f"knowledge vector has {x_kno.shape[0]} features, model expects {self.m}"
            )
        if x_emb.shape[1] != self.d:
            raise nn.ShapeError(f"embedding width {x_emb.shape[1]}, model expects {self.d}")
        n = x_emb.shape[0]
        k = np.tile(x_kno, (n, 1))
        scores = nn.matmul(q.T, k) / math.sqrt(self.m)
        attn = nn.softmax_rows(scores)
        y = nn.matmul(v, attn)
        stats, pool_cache = attentive_pool(
            y, self.params["pool.w"].value, self.params["pool.b"].value, self.params["pool.u"].value
        )
        logits = stats @ self.params["cls.w"].value + self.params["cls.b"].value
        if not want_cache:
            return logits, attn, y
        cache = (x_emb, k, q, v, attn, y, stats, pool_cache)
        return logits, attn, y, cache

    def backward_parts(self, dlogits, cache):
        """Accumulates pool/classifier gradients; returns (dq, dv) so the
        caller can fold the two big projection gradients, possibly batched."""
        x_emb, k, q, v, attn, y, stats, pool_cache = cache
        ps = self.params
        dlogits = np.asarray(dlogits, dtype=float).reshape(-1)
        ps["cls.w"].grad += np.outer(stats, dlogits)
        ps["cls.b"].grad += dlogits
        dstats = ps["cls.w"].value @ dlogits

        dy, dw, db, du = attentive_pool_backward(dstats, pool_cache)
        ps["pool.w"].grad += dw
        ps["pool.b"].grad += db
        ps["pool.u"].grad += du

        dv = nn.matmul(dy, attn.T)
        dattn = nn.matmul(v.T, dy)
        dscores = nn.softmax_rows_backward(dattn, attn) / math.sqrt(self.m)
        dq = nn.matmul(k, dscores.T)
        return dq, dv

    def backward(self, dlogits, cache):
        x_emb = cache[0]
        dq, dv = self.backward_parts(dlogits, cache)
        self.params["att.wq"].grad += x_emb.T @ dq
        self.params["att.wv"].grad += x_emb.T @ dv

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: p.value for name, p in self.params.items()}

    def meta(self) -> dict:
        return {"kind": self.kind, "m": self.m, "d": self.d, "pool_hidden": self.pool_hidden}


# ---------------------------------------------------------------------------
# self-attention baseline

class SelfAttentionModel:
    """Linear projection + layer norm, single-head self-attention over
    time, attentive pooling, linear classifier."""

    kind = "self"

    def __init__(
        self,
        d_in: int,
        hidden: int = 128,
        pool_hidden: int = 64,
        rng: np.random.Generator | None = None,
    ):
        self.d_in = d_in
        self.hidden = hidden
        self.pool_hidden = pool_hidden
        rng = rng or np.random.default_rng(np.random.Philox(0))
        h = hidden
        ps = nn.ParamSet()
        ps.add("proj.w", _uniform_init(rng, (d_in, h), d_in))
        ps.add("proj.b", np.zeros(h))
        ps.add("ln.gain", np.ones(h))
        ps.add("ln.offset", np.zeros(h))
        ps.add("att.wq", _uniform_init(rng, (h, h), h))
        ps.add("att.wk", _uniform_init(rng, (h, h), h))
        ps.add("att.wv", _uniform_init(rng, (h, h), h))
        ps.add("pool.w", _uniform_init(rng, (pool_hidden, h), h))
        ps.add("pool.b", np.zeros(pool_hidden))
        ps.add("pool.u", _uniform_init(rng, (pool_hidden,), pool_hidden))
        ps.add("cls.w", _uniform_init(rng, (2 * h, 2), 2 * h))
        ps.add("cls.b", np.zeros(2))
        self.params = ps

    def forward(self, x: np.ndarray, want_cache: bool = False):
        x = nn._as2d(x)
        if x.shape[1] != self.d_in:
            raise nn.ShapeError(f"input width {x.shape[1]}, model expects {self.d_in}")
        ps = self.params
        h0 = nn.add_bias(nn.matmul(x, ps["proj.w"].value), ps["proj.b"].value)
        h1, ln_cache = nn.layer_norm(h0, ps["ln.gain"].value, ps["ln.offset"].value)
        qs = nn.matmul(h1, ps["att.wq"].value)
        ks = nn.matmul(h1, ps["att.wk"].value)
        vs = nn.matmul(h1, ps["att.wv"].value)
        scores = nn.matmul(qs, ks.T) / math.sqrt(self.hidden)
        attn = nn.softmax_rows(scores)
        ctx = nn.matmul(attn, vs)
        stats, pool_cache = attentive_pool(
            ctx, ps["pool.w"].value, ps["pool.b"].value, ps["pool.u"].value
        )
        logits = stats @ ps["cls.w"].value + ps["cls.b"].value
        if not want_cache:
            return logits
        return logits, (x, h1, ln_cache, qs, ks, vs, attn, ctx, stats, pool_cache)

    def backward(self, dlogits, cache):
        x, h1, ln_cache, qs, ks, vs, attn, ctx, stats, pool_cache = cache
        ps = self.params
        dlogits = np.asarray(dlogits, dtype=float).reshape(-1)
        ps["cls.w"].grad += np.outer(stats, dlogits)
        ps["cls.b"].grad += dlogits
        dstats = ps["cls.w"].value @ dlogits

        dctx, dw, db, du = attentive_pool_backward(dstats, pool_cache)
        ps["pool.w"].grad += dw
        ps["pool.b"].grad += db
        ps["pool.u"].grad += du

        dattn = nn.matmul(dctx, vs.T)
        dvs = nn.matmul(attn.T, dctx)
        dscores = nn.softmax_rows_backward(dattn, attn) / math.sqrt(self.hidden)
        dqs = nn.matmul(dscores, ks)
        dks = nn.matmul(dscores.T, qs)

        dh1 = dqs @ ps["att.wq"].value.T + dks @ ps["att.wk"].value.T + dvs @ ps["att.wv"].value.T
        ps["att.wq"].grad += h1.T @ dqs
        ps["att.wk"].grad += h1.T @ dks
        ps["att.wv"].grad += h1.T @ dvs

        dh0, dgain, doffset = nn.layer_norm_backward(dh1, ln_cache)
        ps["ln.gain"].grad += dgain
        ps["ln.offset"].grad += doffset
        ps["proj.w"].grad += x.T @ dh0
        ps["proj.b"].grad += dh0.sum(axis=0)

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: p.value for name, p in self.params.items()}

    def meta(self) -> dict:
        return {
            "kind": self.kind,
            "d_in": self.d_in,
            "hidden": self.hidden,
            "pool_hidden": self.pool_hidden,
        }


# ---------------------------------------------------------------------------
# training / evaluation protocol

@dataclass
class TrainedModel:
    model: CrossAttentionModel | SelfAttentionModel
    standardizer: Standardizer
    config: TrainConfig
    seed: int
    loss_history: list[float] = field(default_factory=list)

    def logits_for(self, sample: Sample) -> np.ndarray:
        kno = self.standardizer.transform(sample.knowledge)
        if self.model.kind == "cross":
            logits, _, _ = self.model.forward(sample.embedding, kno)
            return logits
        x = sample.embedding if self.config.input_kind == "embedding" else kno.reshape(1, -1)
        return self.model.forward(x)

    def attention_for(self, sample: Sample) -> np.ndarray:
        if self.model.kind != "cross":
            raise ValueError("attention matrices exist only for the cross-attention model")
        kno = self.standardizer.transform(sample.knowledge)
        _, attn, _ = self.model.forward(sample.embedding, kno)
        return attn


def _build_model(config: TrainConfig, samples: Sequence[Sample], rng) -> CrossAttentionModel | SelfAttentionModel:
    m = samples[0].knowledge.shape[0]
    d = samples[0].embedding.shape[1]
    if config.model == "cross":
        return CrossAttentionModel(m=m, d=d, pool_hidden=config.pool_hidden, rng=rng)
    d_in = d if config.input_kind == "embedding" else m
    return SelfAttentionModel(d_in=d_in, hidden=config.hidden, pool_hidden=config.pool_hidden, rng=rng)


def train(config: TrainConfig, train_samples: Sequence[Sample], seed: int) -> TrainedModel:
    """Train one model; bitwise deterministic for a fixed (config, data, seed).

    The knowledge standardizer is fitted on ``train_samples`` here and
    stored on the result so evaluation reuses train statistics.
    """
    config.validate()
    if not train_samples:
        raise ValueError("train: empty training set")
    rng = np.random.Generator(np.random.Philox(seed))
    model = _build_model(config, train_samples, rng)
    standardizer = Standardizer.fit([s.knowledge for s in train_samples])
    kno = [standardizer.transform(s.knowledge) for s in train_samples]
    n = len(train_samples)
    history: list[float] = []

    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            model.params.zero_grad()
            batch_loss = _batch_pass(model, config, train_samples, kno, batch)
            epoch_loss += batch_loss * len(batch)
            nn.adamw_step(
                model.params, lr=config.lr, weight_decay=config.weight_decay
            )
        mean_loss = epoch_loss / n
        if not np.isfinite(mean_loss):
            raise RuntimeError(
                f"train: non-finite loss at epoch {epoch}; check the learning rate "
                "and feature scaling (are knowledge vectors standardized?)"
            )
        history.append(mean_loss)
    return TrainedModel(model=model, standardizer=standardizer, config=config, seed=seed,
                        loss_history=history)


def _batch_pass(model, config, samples, kno, batch_idx) -> float:
    """Forward/backward over one batch, averaging gradients; returns mean loss."""
    scale = 1.0 / len(batch_idx)
    total = 0.0
    if model.kind == "cross":
        embs = [samples[i].embedding for i in batch_idx]
        x_cat = np.vstack(embs)
        q_cat = x_cat @ model.params["att.wq"].value
        v_cat = x_cat @ model.params["att.wv"].value
        dq_parts, dv_parts = [], []
        row = 0
        for i in batch_idx:
            emb = samples[i].embedding
            rows = emb.shape[0]
            q = q_cat[row : row + rows]
            v = v_cat[row : row + rows]
            row += rows
            logits, _, _, cache = model.forward_parts(emb, kno[i], q, v, want_cache=True)
            loss, dlogits = nn.cross_entropy(logits, samples[i].label)
            total += loss
            dq, dv = model.backward_parts(dlogits * scale, cache)
            dq_parts.append(dq)
            dv_parts.append(dv)
        dq_cat = np.vstack(dq_parts)
        dv_cat = np.vstack(dv_parts)
        model.params["att.wq"].grad += x_cat.T @ dq_cat
        model.params["att.wv"].grad += x_cat.T @ dv_cat
    else:
        for i in batch_idx:
            x = samples[i].embedding if config.input_kind == "embedding" else kno[i].reshape(1, -1)
            logits, cache = model.forward(x, want_cache=True)
            loss, dlogits = nn.cross_entropy(logits, samples[i].label)
            total += loss
            model.backward(dlogits * scale, cache)
    return total * scale


@dataclass
class EvalResult:
    accuracy: float
    predictions: list[tuple[str, int, int]]  # (sample_id, predicted, label)


def evaluate(trained: TrainedModel, test_samples: Sequence[Sample]) -> EvalResult:
    """Argmax accuracy; logit ties resolve to class index 0 (documented)."""
    if not test_samples:
        raise ValueError("evaluate: empty test set")
    predictions = []
    correct = 0
    for s in test_samples:
        logits = trained.logits_for(s)
        pred = int(np.argmax(logits))
        predictions.append((s.sample_id, pred, s.label))
        correct += int(pred == s.label)
    return EvalResult(accuracy=correct / len(test_samples), predictions=predictions)


@dataclass
class SeedOutcome:
    seed: int
    accuracy: float
    trained: TrainedModel


@dataclass
class MultiSeedResult:
    outcomes: list[SeedOutcome]
    mean_accuracy: float
    std_accuracy: float
    best_seed: int

    def best(self) -> SeedOutcome:
        return next(o for o in self.outcomes if o.seed == self.best_seed)


def multi_seed_run(
    config: TrainConfig,
    train_samples: Sequence[Sample],
    test_samples: Sequence[Sample],
    seeds: Sequence[int] | None = None,
) -> MultiSeedResult:
    """Independent train+evaluate per seed; best seed = highest accuracy,
    ties broken toward the lowest seed value."""
    seeds = list(config.seeds) if seeds is None else list(seeds)
    if not seeds:
        raise ValueError("multi_seed_run: no seeds")
    outcomes = []
    for seed in seeds:
        trained = train(config, train_samples, seed)
        result = evaluate(trained, test_samples)
        outcomes.append(SeedOutcome(seed=seed, accuracy=result.accuracy, trained=trained))
    accs = np.array([o.accuracy for o in outcomes])
    best = min(outcomes, key=lambda o: (-o.accuracy, o.seed)).seed
    return MultiSeedResult(
        outcomes=outcomes,
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std()),
        best_seed=best,
    )


# ---------------------------------------------------------------------------
# checkpoints

def save_model(trained: TrainedModel, path: str | Path) -> None:
    tensors = dict(trained.model.tensors())
    tensors["standardizer.mean"] = trained.standardizer.mean
    tensors["standardizer.std"] = trained.standardizer.std
    meta = {
        "model": trained.model.meta(),
        "seed": trained.seed,
        "loss_history": [float(v) for v in trained.loss_history],
        "config": {
            "lr": trained.config.lr,
            "weight_decay": trained.config.weight_decay,
            "epochs": trained.config.epochs,
            "batch_size": trained.config.batch_size,
            "seeds": list(trained.config.seeds),
            "hidden": trained.config.hidden,
            "pool_hidden": trained.config.pool_hidden,
            "model": trained.config.model,
            "input_kind": trained.config.input_kind,
        },
    }
    nn.save_checkpoint(path, tensors, meta)


def load_model(path: str | Path) -> TrainedModel:
    tensors, meta = nn.load_checkpoint(path)
    config_doc = dict(meta["config"])
    config_doc["seeds"] = tuple(config_doc.get("seeds", range(10)))
    config = TrainConfig(**config_doc)
    model_meta = meta["model"]
    if model_meta["kind"] == "cross":
        model = CrossAttentionModel(
            m=model_meta["m"], d=model_meta["d"], pool_hidden=model_meta["pool_hidden"]
        )
    else:
        model = SelfAttentionModel(
            d_in=model_meta["d_in"],
            hidden=model_meta["hidden"],
            pool_hidden=model_meta["pool_hidden"],
        )
    for name, p in model.params.items():
        stored = tensors[name]
        p.value[...] = stored.reshape(p.value.shape)
    standardizer = Standardizer(
        mean=tensors["standardizer.mean"].reshape(-1),
        std=tensors["standardizer.std"].reshape(-1),
    )
    return TrainedModel(
        model=model,
        standardizer=standardizer,
        config=config,
        seed=meta["seed"],
        loss_history=list(meta["loss_history"]),
    )
