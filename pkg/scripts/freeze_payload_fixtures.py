"""Regenerate the frontend's frozen payload fixtures.

The frontend snapshot suite renders these exact documents; regenerate them
only when the payload schema changes, and re-review the snapshots after.

Run: python scripts/freeze_payload_fixtures.py
"""

import json
import os

import numpy as np

from finch.payload import jsonable
from finch.session import SessionStore
from finch.tabular import TargetSpec, build_dataset

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "frontend", "tests", "fixtures")


def bike_like_dataset():
    rng = np.random.default_rng(42)
    n = 6000
    hour = rng.integers(0, 24, n).astype(float)
    workingday = rng.integers(0, 2, n).astype(float)
    season = rng.integers(0, 4, n).astype(float)
    temperature = np.round(np.clip(rng.normal(15, 8, n), -5, 35), 1)
    rush = np.exp(-((hour - 8) ** 2) / 4) + np.exp(-((hour - 17.5) ** 2) / 5)
    afternoon = np.exp(-((hour - 14) ** 2) / 12)
    rentals = 40 + 240 * (workingday * rush + (1 - workingday) * afternoon)
    rentals += 4.0 * temperature - 30.0 * (season == 0) + rng.normal(0, 12, n)
    truth = rentals + rng.normal(2.0, 8.0, n)
    return build_dataset(
        {"hour": hour, "workingday": workingday, "season": season, "temperature": temperature},
        {"rentals": rentals},
        truth=truth,
        truth_name="observed",
    )


def write(name: str, doc: dict) -> None:
    path = os.path.join(OUT_DIR, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(jsonable(doc), fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(f"wrote {os.path.relpath(path)}")


def main() -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    store = SessionStore()
    store.add_dataset(bike_like_dataset(), "bike-like")

    def fresh(commands):
        session = store.create_session(
            "bike-like",
            TargetSpec(mode="regression"),
            {"values": {"hour": 15.0, "workingday": 0.0, "season": 0.0, "temperature": 22.0}},
        )
        for command, args in commands:
            store.mutate_session(session.id, command, args)
        return session

    base_cmds = [("set_x_feature", {"feature": "hour"})]
    chain_cmds = base_cmds + [
        ("add_feature", {"feature": "workingday"}),
        ("add_feature", {"feature": "season"}),
    ]

    s = fresh(base_cmds)
    write("single_feature.json", json.loads(store.payload_bytes(s.id)))

    s = fresh(chain_cmds)
    write("three_feature.json", json.loads(store.payload_bytes(s.id)))

    s = fresh(chain_cmds + [("set_view", {"show_truth": True})])
    write("truth_view.json", json.loads(store.payload_bytes(s.id)))

    s = fresh(chain_cmds + [("set_view", {"show_uncertainty": True})])
    write("uncertainty_view.json", json.loads(store.payload_bytes(s.id)))

    s = fresh(chain_cmds + [("set_view", {"show_interaction": True})])
    write("interaction_view.json", json.loads(store.payload_bytes(s.id)))

    s = fresh(base_cmds)
    write("ranking.json", store.ranking(s.id))


if __name__ == "__main__":
    main()
