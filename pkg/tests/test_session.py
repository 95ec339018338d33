import json

import numpy as np
import pytest

from finch.errors import (
    ChainError,
    DatasetNotFoundError,
    FeatureNotFoundError,
    ViewUnavailableError,
)
from finch.session import SessionStore
from finch.tabular import TargetSpec
from tests.conftest import dataset_from_synth


@pytest.fixture
def store(product_table):
    store = SessionStore()
    store.add_dataset(dataset_from_synth(product_table), "synthetic")
    return store


def make_session(store, instance=None):
    return store.create_session(
        "synthetic", TargetSpec(mode="regression"), instance or {"values": {"x": 0.5, "z": 0.9}}
    )


class TestSessionLifecycle:
    def test_create_from_row(self, store):
        session = store.create_session("synthetic", TargetSpec(mode="regression"), {"row": 42})
        assert session.state.instance.provenance == "dataset_row:42"
        assert session.state.instance.imputed_features == frozenset()
        assert session.state.chain is None

    def test_create_with_partial_instance(self, store):
        session = store.create_session(
            "synthetic", TargetSpec(mode="regression"), {"values": {"x": 0.4}}
        )
        assert session.state.instance.imputed_features == {"z"}

    def test_unknown_dataset(self, store):
        with pytest.raises(DatasetNotFoundError):
            store.create_session("nope", TargetSpec(mode="regression"), None)

    def test_unknown_instance_feature(self, store):
        with pytest.raises(FeatureNotFoundError):
            make_session(store, {"values": {"frog": 1.0}})


class TestCommands:
    def test_set_x_then_add(self, store):
        session = make_session(store)
        s1 = store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        assert s1["x_feature"] == "x"
        s2 = store.mutate_session(session.id, "add_feature", {"feature": "z"})
        assert s2["conditioning_features"] == ["z"]
        assert len(s2["subset_sizes"]) == 2

    def test_add_x_feature_is_error(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        with pytest.raises(ChainError):
            store.mutate_session(session.id, "add_feature", {"feature": "x"})

    def test_remove_on_empty_chain_is_error(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        with pytest.raises(ChainError):
            store.mutate_session(session.id, "remove_last")

    def test_set_x_resets_chain(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "add_feature", {"feature": "z"})
        summary = store.mutate_session(session.id, "set_x_feature", {"feature": "z"})
        assert summary["x_feature"] == "z"
        assert summary["conditioning_features"] == []

    def test_set_instance_rebuilds_chain(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "add_feature", {"feature": "z"})
        before = session.state.chain.steps[1].row_indices
        store.mutate_session(session.id, "set_instance", {"values": {"x": 0.5, "z": 0.1}})
        after = session.state.chain.steps[1].row_indices
        assert session.state.chain.conditioning_features == ("z",)
        assert not np.array_equal(before, after)

    def test_show_truth_without_truth_column(self, product_table):
        store = SessionStore()
        store.add_dataset(dataset_from_synth(product_table, truth=False), "bare")
        session = store.create_session("bare", TargetSpec(mode="regression"), {"row": 0})
        with pytest.raises(ViewUnavailableError) as err:
            store.mutate_session(session.id, "set_view", {"show_truth": True})
        assert "truth" in str(err.value)

    def test_unknown_command_and_view_option(self, store):
        session = make_session(store)
        with pytest.raises(ChainError):
            store.mutate_session(session.id, "launch_rockets", {})
        with pytest.raises(ViewUnavailableError):
            store.mutate_session(session.id, "set_view", {"sparkles": True})


class TestPayload:
    def payload(self, store, session):
        return json.loads(store.payload_bytes(session.id))

    def test_requires_x_feature(self, store):
        session = make_session(store)
        with pytest.raises(ChainError):
            store.payload_bytes(session.id)

    def test_depth0_base_only(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        doc = self.payload(store, session)
        assert set(doc["curves"]) == {"base"}
        assert doc["highlight"]["mode"] == "base_vs_mean"
        assert doc["decomposition"] is None
        assert doc["instance_marker"]["x"] == 0.5
        assert doc["mean_line"] == pytest.approx(1.25, abs=0.02)

    def test_depth1_base_and_current(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "add_feature", {"feature": "z"})
        doc = self.payload(store, session)
        assert set(doc["curves"]) == {"base", "current"}
        assert doc["highlight"]["mode"] == "base_vs_current"
        assert doc["decomposition"]["feature"] == "z"

    def test_depth2_previous_present_older_hidden(self, product_table):
        # Four features so a depth-3 chain exists: older curves must be
        # absent from the wire, not merely unstyled.
        rng = np.random.default_rng(5)
        from finch import build_dataset

        n = 2000
        cols = {name: rng.random(n) for name in ("x", "z", "w", "v")}
        truth = cols["x"] + cols["z"]
        ds = build_dataset(cols, {"prediction": truth}, truth=truth, truth_name="truth")
        store = SessionStore()
        store.add_dataset(ds, "four")
        session = store.create_session("four", TargetSpec(mode="regression"), {"row": 3})
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        for feat in ("z", "w", "v"):
            store.mutate_session(session.id, "add_feature", {"feature": feat})
        doc = json.loads(store.payload_bytes(session.id))
        assert set(doc["curves"]) == {"base", "previous", "current"}
        assert doc["highlight"]["mode"] == "previous_vs_current"
        assert len(doc["subset_diagnostics"]) == 4

        # The documented alternative at depth >= 2: current against base.
        store.mutate_session(session.id, "set_view", {"highlight_mode": "current_vs_base"})
        doc = json.loads(store.payload_bytes(session.id))
        assert doc["highlight"]["mode"] == "current_vs_base"
        got = np.array(doc["highlight"]["series"], dtype=float)
        cur = np.array(doc["curves"]["current"]["values"], dtype=float)
        base = np.array(doc["curves"]["base"]["values"], dtype=float)
        assert np.allclose(got, cur - base, equal_nan=True)

        # Even with every view on, the wire never carries more than four curves.
        store.mutate_session(
            session.id, "set_view", {"show_truth": True, "show_uncertainty": True}
        )
        doc = json.loads(store.payload_bytes(session.id))
        assert set(doc["curves"]) == {"base", "previous", "current", "truth"}
        assert len(doc["curves"]) <= 4

    def test_uncertainty_band(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "set_view", {"show_uncertainty": True})
        doc = self.payload(store, session)
        assert doc["uncertainty"] is not None
        lower = np.array(doc["uncertainty"]["lower"])
        upper = np.array(doc["uncertainty"]["upper"])
        values = np.array(doc["curves"]["base"]["values"])
        dev = np.array(doc["curves"]["base"]["dev"])
        assert np.allclose(upper - values, dev)
        assert np.allclose(values - lower, dev)

    def test_truth_view(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "set_view", {"show_truth": True})
        doc = self.payload(store, session)
        assert "truth" in doc["curves"]
        # Synthetic truth equals the prediction: deviation is identically 0.
        assert np.allclose(np.array(doc["truth_deviation"]), 0.0)

    def test_interaction_view(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "add_feature", {"feature": "z"})
        store.mutate_session(session.id, "set_view", {"show_interaction": True})
        doc = self.payload(store, session)
        assert doc["highlight"]["mode"] == "interaction"
        assert np.allclose(
            np.array(doc["highlight"]["series"]),
            np.array(doc["decomposition"]["interaction"]),
        )

    def test_payload_pure_function_of_state(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.mutate_session(session.id, "add_feature", {"feature": "z"})
        assert store.payload_bytes(session.id) == store.payload_bytes(session.id)

    def test_view_toggle_hits_curve_cache(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        store.payload_bytes(session.id)
        cached = dict(session._curve_cache)
        store.mutate_session(session.id, "set_view", {"show_uncertainty": True})
        store.payload_bytes(session.id)
        for key, value in cached.items():
            assert session._curve_cache[key] is value

    def test_replay_reproduces_payload(self, store):
        commands = [
            ("set_x_feature", {"feature": "x"}),
            ("add_feature", {"feature": "z"}),
            ("set_view", {"show_uncertainty": True, "smoothing_enabled": False}),
        ]
        s1 = make_session(store)
        s2 = make_session(store)
        for cmd, args in commands:
            store.mutate_session(s1.id, cmd, args)
        for cmd, args in commands:
            store.mutate_session(s2.id, cmd, args)
        assert store.payload_bytes(s1.id) == store.payload_bytes(s2.id)

    def test_smoothing_toggle_changes_display_only(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "z"})  # z continuous
        doc_on = self.payload(store, session)
        store.mutate_session(session.id, "set_view", {"smoothing_enabled": False})
        doc_off = self.payload(store, session)
        assert doc_on["curves"]["base"]["raw"] == doc_off["curves"]["base"]["raw"]
        assert doc_off["curves"]["base"]["values"] == doc_off["curves"]["base"]["raw"]


class TestRankingEndpointLogic:
    def test_ranking_payload(self, store):
        session = make_session(store)
        store.mutate_session(session.id, "set_x_feature", {"feature": "x"})
        doc = store.ranking(session.id)
        assert doc["score_kind"] == "interaction_at_instance"
        assert [e["feature"] for e in doc["entries"]] == ["z"]
        assert "preview" in doc["entries"][0]

    def test_ranking_requires_chain(self, store):
        session = make_session(store)
        with pytest.raises(ChainError):
            store.ranking(session.id)
