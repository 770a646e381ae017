"""Training the cross-attention model on a planted-cue synthetic dataset.

Small dimensions keep this quick; the acceptance suite runs the full
1024-dimensional version.  Same seed always reproduces the same model
bit for bit.
"""

import numpy as np

from speechcue.embed import SyntheticSpec, generate_synthetic
from speechcue.models import TrainConfig, evaluate, multi_seed_run, train

spec = SyntheticSpec(
    train_per_class=40, test_per_class=12,
    m=20, d=64, n_rows=(3, 7),
    planted=(2, 9, 15), effect_size=2.0, seed=7,
)
data = generate_synthetic(spec)
print(f"dataset: {len(data.train)} train / {len(data.test)} test, "
      f"planted features {data.truth['planted_indices']}")

config = TrainConfig(epochs=10, batch_size=16, model="cross", pool_hidden=16)
trained = train(config, data.train, seed=0)
print("loss history:", [round(v, 4) for v in trained.loss_history])

result = evaluate(trained, data.test)
print(f"seed 0 test accuracy: {result.accuracy:.3f}")

multi = multi_seed_run(config, data.train, data.test, seeds=range(5))
print(f"5 seeds: mean {multi.mean_accuracy:.3f} +- {multi.std_accuracy:.3f}, "
      f"best seed {multi.best_seed}")

# determinism: retraining with the same seed gives identical parameters
again = train(config, data.train, seed=0)
identical = all(
    np.array_equal(p.value, again.model.params[name].value)
    for name, p in trained.model.params.items()
)
print("bitwise deterministic retrain:", identical)

# the self-attention baseline accepts either embeddings or the knowledge vector
baseline_cfg = TrainConfig(epochs=10, batch_size=16, model="self",
                           input_kind="knowledge", hidden=32, pool_hidden=16)
baseline = train(baseline_cfg, data.train, seed=0)
print(f"baseline (knowledge input) accuracy: "
      f"{evaluate(baseline, data.test).accuracy:.3f}")
