"""The full exploration workflow through the session layer, exactly as the
HTTP service drives it (no network needed here).

Run: python demos/05_session_walkthrough.py
"""

import json

import numpy as np

from finch.session import SessionStore
from finch.synth import builtin_function, generate
from finch.tabular import TargetSpec, build_dataset

table = generate(builtin_function("product"), n=5000, seed=5, levels=11, quantize=("x",))
ds = build_dataset(
    {name: table.matrix[:, i] for i, name in enumerate(table.feature_names)},
    {"prediction": table.prediction},
    truth=table.truth,
    truth_name="truth",
)

store = SessionStore()
store.add_dataset(ds, "walkthrough")

# 1. Create a session: dataset + target + instance (custom, partially given:
#    the missing z is imputed with its dataset mean).
session = store.create_session(
    "walkthrough", TargetSpec(mode="regression"), {"values": {"x": 0.5}}
)
print("session:", json.dumps(store.summary(session.id), indent=2))

# 2. Pick the x-axis feature, then refine with a conditioning feature.
store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
store.mutate_session(session.id, "set_instance", {"values": {"x": 0.5, "z": 0.9}})
store.mutate_session(session.id, "add_feature", {"feature": "z"})

# 3. Toggle views: uncertainty band on, smoothing off.
store.mutate_session(session.id, "set_view", {"show_uncertainty": True, "show_truth": True})

payload = json.loads(store.payload_bytes(session.id))
print("\npayload summary:")
print("  curves on the wire:", sorted(payload["curves"]))
print("  highlight mode:", payload["highlight"]["mode"])
print("  mean line:", round(payload["mean_line"], 3))
print("  instance marker at x =", payload["instance_marker"]["x"])
print("  subset sizes per step:", [d["size"] for d in payload["subset_diagnostics"]])
print("  main effect of the last step:", round(payload["decomposition"]["main_effect"], 3))

# 4. Payloads are a pure function of state: identical bytes on repeat reads.
assert store.payload_bytes(session.id) == store.payload_bytes(session.id)

# 5. Stepping back reuses cached subsets; the payload shrinks to base only.
store.mutate_session(session.id, "remove_last")
payload = json.loads(store.payload_bytes(session.id))
print("\nafter remove_last, curves:", sorted(payload["curves"]))
