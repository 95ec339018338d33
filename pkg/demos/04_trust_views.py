"""Trust calibration: subset distributions, ground-truth deviation, and
uncertainty bands.

Run: python demos/04_trust_views.py
"""

import numpy as np

from finch import (
    align_curves,
    build_dataset,
    compute_curve,
    extend_chain,
    feature_distribution,
    impute_instance,
    new_chain,
    truth_deviation,
)

rng = np.random.default_rng(4)
n = 6000
age = np.clip(rng.normal(40, 15, n), 0, 90)
pclass = rng.integers(1, 4, n).astype(float)

# Truth: survival-like outcome; model: systematically optimistic for class 1.
truth = np.clip(0.9 - 0.18 * pclass - 0.004 * age + rng.normal(0, 0.05, n), 0, 1)
model = np.clip(truth + (pclass == 1) * 0.08, 0, 1)

ds = build_dataset(
    {"age": age, "pclass": pclass},
    {"p_survived": model},
    truth=truth,
    truth_name="survived",
)
col = np.asarray(ds.predictions["p_survived"])
instance = impute_instance({"age": 30.0, "pclass": 1.0}, ds)

chain = extend_chain(new_chain(ds, "pclass", instance), "age")
rows = chain.current.row_indices
print(f"subset conditioned on age near 30: {rows.size} rows")

# 1. Where does the subset sit, relative to everyone?  Brightness is
# normalized per population, so the small subset stays visible.
hm = feature_distribution(ds, rows, "age", instance)
print("\nage distribution (full vs subset, relative brightness 0..1):")
for i in range(hm.n_bins):
    lo, hi = hm.bin_edges[i], hm.bin_edges[i + 1]
    marker = " <- instance" if i == hm.instance_bin else ""
    print(f"  [{lo:5.1f},{hi:5.1f})  full={hm.full_rel[i]:4.2f}  subset={hm.subset_rel[i]:4.2f}{marker}")

# 2. Ground truth: the dotted line.  Deviation = prediction - truth per class.
pred_curve = compute_curve(ds, rows, "pclass", col, smoothing=False)
truth_curve = compute_curve(ds, rows, "pclass", ds.truth, source_column="truth", smoothing=False)
bundle = align_curves([pred_curve], "categorical", truth=truth_curve)
dev = truth_deviation(bundle)
print("\nprediction minus truth per class (positive = model above reality):")
for c, d in zip(bundle.grid, dev):
    verdict = "overestimates" if d > 0.02 else "tracks"
    print(f"  class {c:.0f}: {d:+.3f}  ({verdict})")

# 3. Uncertainty: the sample standard deviation around each mean.
print("\nuncertainty band (mean +/- dev per class):")
for c, m, s in zip(pred_curve.x, pred_curve.mean, pred_curve.dev):
    print(f"  class {c:.0f}: {m:.3f} +/- {s:.3f}")
