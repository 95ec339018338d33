"""Dependence curves over real rows: load a table, group, smooth.

Run: python demos/01_dependence_curves.py
"""

import numpy as np

from finch import build_dataset, compute_curve, load_table
from finch.synth import builtin_function, generate, to_csv

# A seeded synthetic table: two uniform features, prediction = x + z + x*z.
# Quantizing x onto 11 levels gives every x value enough rows for a stable
# conditional mean.
table = generate(builtin_function("product"), n=5000, seed=1, levels=11, quantize=("x",))
ds = load_table(to_csv(table), {"prediction": "prediction", "truth": "truth"})

print(f"loaded {ds.n_rows} rows, features: {ds.feature_names}")
for meta in ds.features:
    print(f"  {meta.name}: {meta.kind}, {meta.unique_count} distinct values, range [{meta.vmin:.2f}, {meta.vmax:.2f}]")

# The base curve: mean prediction per x value, over the whole dataset.
col = np.asarray(ds.predictions["prediction"])
curve = compute_curve(ds, np.arange(ds.n_rows), "x", col)
print("\nbase curve for x (mean prediction per value):")
for x, m, d, c in zip(curve.x, curve.mean, curve.dev, curve.count):
    bar = "#" * int(m * 20)
    print(f"  x={x:4.1f}  mean={m:6.3f}  dev={d:5.3f}  rows={c:4d}  {bar}")

# x has 11 distinct values, which is at or below the categorical threshold,
# so it is treated as ordinal and never smoothed: smoothed == mean.
assert np.array_equal(curve.smoothed, curve.mean)

# A continuous feature (z keeps its raw draws) smooths by default; the
# smoother is an exponentially weighted average run in both directions.
curve_z = compute_curve(ds, np.arange(ds.n_rows), "z", col)
rough = np.abs(np.diff(curve_z.mean)).mean()
smooth = np.abs(np.diff(curve_z.smoothed)).mean()
print(f"\nz curve roughness: raw {rough:.4f} vs smoothed {smooth:.4f}")
print("smoothing never leaves the raw range:",
      curve_z.smoothed.min() >= curve_z.mean.min() - 1e-9,
      curve_z.smoothed.max() <= curve_z.mean.max() + 1e-9)
