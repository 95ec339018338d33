"""Splitting a step into main effect and interaction, and ranking candidates.

The function x + z + x*z makes the arithmetic visible: conditioning on
z near 0.9 shifts the curve (main effect) and tilts it (interaction with x).

Run: python demos/03_effect_decomposition.py
"""

import numpy as np

from finch import (
    align_curves,
    compute_curve,
    extend_chain,
    impute_instance,
    interaction_series,
    main_effect,
    new_chain,
    rank_next_features,
)
from finch.synth import builtin_function, generate
from finch.tabular import build_dataset

table = generate(builtin_function("product"), n=10_000, seed=6, levels=11, quantize=("x",))
cols = {name: table.matrix[:, i] for i, name in enumerate(table.feature_names)}
ds = build_dataset(cols, {"prediction": table.prediction})
col = np.asarray(ds.predictions["prediction"])

instance = impute_instance({"x": 0.5, "z": 0.9}, ds)
chain = extend_chain(new_chain(ds, "x", instance), "z")

curves = [
    compute_curve(ds, step.row_indices, "x", col, smoothing=False)
    for step in chain.steps
]
bundle = align_curves(curves, ds.feature("x").kind)

a = main_effect(ds, "z", instance, col)
dec = interaction_series(bundle, a, "z", 0.5)
print(f"main effect of z near 0.9: {a:+.3f}   (closed form: 1.5 * (0.9 - 0.5) = +0.600)")
print("interaction series (closed form (y - 0.5) * 0.4):")
for y, g in zip(dec.grid, dec.interaction):
    print(f"  y={y:4.1f}  interaction={g:+.3f}  expected={0.4 * (y - 0.5):+.3f}")

# The decomposition is structural: previous + main + interaction recomposes
# the current curve exactly.
recomposed = bundle.base.values + dec.main_effect + dec.interaction
assert np.abs(recomposed - bundle.current.values).max() <= 1e-9

# Ranking candidates: with an extra pure-noise feature, z wins at an
# instance x away from the centre (where its interaction is visible).
cols["noise"] = np.random.default_rng(3).random(10_000)
ds2 = build_dataset(cols, {"prediction": table.prediction})
inst2 = impute_instance({"x": 0.9, "z": 0.9, "noise": 0.5}, ds2)
ranking = rank_next_features(ds2, new_chain(ds2, "x", inst2), inst2, col)
print("\ncandidate ranking at x = 0.9 (interaction strength at the instance):")
for entry in ranking.entries:
    print(f"  {entry.feature:6s} score={entry.score:.4f} main_effect={entry.main_effect:+.3f}")
