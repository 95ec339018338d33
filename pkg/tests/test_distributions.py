import numpy as np
import pytest

from finch import build_dataset, feature_distribution, impute_instance
from finch.config import EngineConfig
from finch.errors import EmptyDataError


def test_full_subset_matches_full_data(mixed_ds):
    inst = impute_instance({}, mixed_ds)
    hm = feature_distribution(mixed_ds, np.arange(mixed_ds.n_rows), "cont", inst)
    assert np.array_equal(hm.full_rel, hm.subset_rel)
    assert np.array_equal(hm.full_counts, hm.subset_counts)


def test_degenerate_categorical_subset():
    vals = np.array([0.0, 0.0, 1.0, 1.0, 1.0])
    ds = build_dataset({"c": vals}, {"p": np.zeros(5)})
    inst = impute_instance({"c": 1.0}, ds)
    hm = feature_distribution(ds, np.array([2, 3, 4]), "c", inst)
    assert hm.subset_rel.tolist() == [0.0, 1.0]
    assert hm.instance_bin == 1


def test_top_decile_subset_concentrates_in_last_bins():
    rng = np.random.default_rng(0)
    vals = rng.uniform(0.0, 1.0, 5000)
    ds = build_dataset({"v": vals}, {"p": np.zeros(5000)})
    inst = impute_instance({"v": 0.95}, ds)
    cutoff = np.quantile(vals, 0.9)
    subset = np.flatnonzero(vals >= cutoff)
    hm = feature_distribution(ds, subset, "v", inst)
    # Direct counting oracle over the same edges.
    oracle, _ = np.histogram(vals[subset], bins=hm.bin_edges)
    assert np.array_equal(hm.subset_counts, oracle)
    assert hm.subset_counts[-2:].sum() >= 0.9 * subset.size


def test_counts_match_naive_oracle(mixed_ds):
    inst = impute_instance({}, mixed_ds)
    subset = np.arange(0, mixed_ds.n_rows, 7)
    for feat in ("cat", "cont"):
        hm = feature_distribution(mixed_ds, subset, feat, inst)
        col = mixed_ds.column(feat)
        if hm.kind == "categorical":
            for j, c in enumerate(hm.categories):
                assert hm.full_counts[j] == int((col == c).sum())
                assert hm.subset_counts[j] == int((col[subset] == c).sum())
        else:
            full_oracle, _ = np.histogram(col, bins=hm.bin_edges)
            sub_oracle, _ = np.histogram(col[subset], bins=hm.bin_edges)
            assert np.array_equal(hm.full_counts, full_oracle)
            assert np.array_equal(hm.subset_counts, sub_oracle)


def test_normalization_scale_free(mixed_ds):
    inst = impute_instance({}, mixed_ds)
    subset = np.arange(0, mixed_ds.n_rows, 5)
    doubled = np.concatenate([subset, subset])
    a = feature_distribution(mixed_ds, subset, "cont", inst)
    b = feature_distribution(mixed_ds, doubled, "cont", inst)
    assert np.allclose(a.subset_rel, b.subset_rel)


def test_max_normalization_peaks_at_one(mixed_ds):
    inst = impute_instance({}, mixed_ds)
    hm = feature_distribution(mixed_ds, np.arange(10), "cont", inst)
    assert hm.full_rel.max() == 1.0
    assert hm.subset_rel.max() == 1.0


def test_instance_bin_bracket():
    rng = np.random.default_rng(1)
    vals = rng.uniform(-5.0, 5.0, 3000)
    ds = build_dataset({"v": vals}, {"p": np.zeros(3000)})
    for raw in (-5.0, -1.2, 0.0, 3.7, 5.0, 99.0, -99.0):
        inst = impute_instance({"v": raw}, ds)
        hm = feature_distribution(ds, np.arange(100), "v", inst)
        edges = hm.bin_edges
        b = hm.instance_bin
        assert 0 <= b < hm.n_bins
        if edges[0] <= raw <= edges[-1]:
            if b < hm.n_bins - 1:
                assert edges[b] <= raw < edges[b + 1]
            else:
                assert edges[b] <= raw <= edges[b + 1]  # last bin closed


def test_bin_count_configurable():
    rng = np.random.default_rng(2)
    vals = rng.uniform(0, 1, 500)
    ds = build_dataset({"v": vals}, {"p": np.zeros(500)})
    inst = impute_instance({}, ds)
    hm = feature_distribution(ds, np.arange(500), "v", inst, config=EngineConfig(distribution_bins=7))
    assert hm.n_bins == 7


def test_empty_subset_rejected(mixed_ds):
    inst = impute_instance({}, mixed_ds)
    with pytest.raises(EmptyDataError):
        feature_distribution(mixed_ds, np.array([], dtype=int), "cat", inst)
