"""Incremental subset chains: each added feature conditions the curve on
rows similar to the instance.

Run: python demos/02_subset_chains.py
"""

import numpy as np

from finch import build_dataset, extend_chain, impute_instance, new_chain, pop_chain

rng = np.random.default_rng(2)
n = 8000

# Hour-of-day style data: rentals peak at rush hours on working days and in
# the afternoon otherwise.
hour = rng.integers(0, 24, n).astype(float)
workingday = rng.integers(0, 2, n).astype(float)
temperature = np.clip(rng.normal(15, 8, n), -5, 35)
rush = np.exp(-((hour - 8) ** 2) / 4) + np.exp(-((hour - 17.5) ** 2) / 5)
afternoon = np.exp(-((hour - 14) ** 2) / 12)
rentals = 40 + 240 * (workingday * rush + (1 - workingday) * afternoon)
rentals += 4.0 * temperature + rng.normal(0, 12, n)

ds = build_dataset(
    {"hour": hour, "workingday": workingday, "temperature": temperature},
    {"rentals": rentals},
)

# The instance: 3pm on a weekend-like day.
instance = impute_instance({"hour": 15.0, "workingday": 0.0, "temperature": 22.0}, ds)

chain = new_chain(ds, "hour", instance)
print(f"step 0: no conditioning, subset = all {chain.current.size} rows")

chain = extend_chain(chain, "workingday")
step = chain.current
print(f"step 1: similar on {step.similarity_features} -> {step.size} rows")
print(f"        thresholds: {step.thresholds()}")

chain = extend_chain(chain, "temperature")
step = chain.current
print(f"step 2: similar on {step.similarity_features} -> {step.size} rows")
print(f"        farthest selected row at distance {step.distances.max():.3f}")

# Every step re-selects from the full dataset with joint similarity, so the
# guaranteed floor of rows holds at depth 2 as well as depth 1.
assert step.size >= 50

# Stepping back reuses the cached earlier selections.
back = pop_chain(chain)
print(f"\nafter pop: conditioning = {back.conditioning_features}, "
      f"subset = {back.current.size} rows (cached, not recomputed)")
