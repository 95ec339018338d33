import numpy as np
import pytest

from finch import (
    TargetSpec,
    build_dataset,
    impute_instance,
    instance_from_row,
    load_table,
    normalize_value,
    resolve_target,
)
from finch.config import EngineConfig
from finch.errors import (
    EmptyDataError,
    FeatureNotFoundError,
    ParseError,
    SchemaError,
    TargetError,
)

CSV_BASIC = """a,b,pred
0,1,2.0
10,1,2.0
5,0,2.0
2.5,0,2.0
"""


def test_load_constant_prediction_mean():
    ds = load_table(CSV_BASIC, {"pred": "prediction"})
    assert ds.n_rows == 4
    assert ds.global_means["pred"] == 2.0


def test_binary_column_is_categorical():
    rng = np.random.default_rng(0)
    col = rng.integers(0, 2, 1000).astype(float)
    ds = build_dataset({"flag": col}, {"p": np.zeros(1000)})
    meta = ds.feature("flag")
    assert meta.kind == "categorical"
    assert meta.unique_count == 2
    assert meta.categories == (0.0, 1.0)


def test_many_distinct_reals_is_continuous():
    rng = np.random.default_rng(1)
    col = rng.uniform(-3.0, 7.0, 500)
    ds = build_dataset({"v": col}, {"p": np.zeros(500)})
    meta = ds.feature("v")
    assert meta.kind == "continuous"
    # Direct scan oracle for the observed extremes.
    assert meta.vmin == min(col)
    assert meta.vmax == max(col)
    assert meta.categories is None


def test_categorical_threshold_is_inclusive():
    # Exactly 24 distinct values (hourly data) stays categorical/ordinal.
    col = np.tile(np.arange(24.0), 10)
    ds = build_dataset({"hour": col}, {"p": np.zeros(240)})
    assert ds.feature("hour").kind == "categorical"
    col25 = np.tile(np.arange(25.0), 10)
    ds25 = build_dataset({"hour": col25}, {"p": np.zeros(250)})
    assert ds25.feature("hour").kind == "continuous"


def test_load_determinism_bit_identical():
    text = CSV_BASIC
    d1 = load_table(text, {"pred": "prediction"})
    d2 = load_table(text, {"pred": "prediction"})
    assert np.array_equal(d1.matrix, d2.matrix)
    assert np.array_equal(d1.normalized, d2.normalized)
    assert d1.features == d2.features
    assert np.array_equal(d1.predictions["pred"], d2.predictions["pred"])


def test_missing_prediction_role_is_schema_error():
    with pytest.raises(SchemaError):
        load_table(CSV_BASIC, {})


def test_non_numeric_cell_reports_row_and_column():
    bad = "a,pred\n1,2.0\noops,3.0\n"
    with pytest.raises(ParseError) as err:
        load_table(bad, {"pred": "prediction"})
    assert err.value.detail["row"] == 3
    assert err.value.detail["column"] == "a"


def test_rows_with_missing_values_are_dropped():
    csv = "a,pred\n1,2.0\n,3.0\n2,\n4,5.0\n"
    ds = load_table(csv, {"pred": "prediction"})
    assert ds.n_rows == 2
    assert ds.n_dropped == 2


def test_empty_table_is_empty_data_error():
    with pytest.raises(EmptyDataError):
        load_table("a,pred\n", {"pred": "prediction"})


def test_ignore_role_and_default_feature_role():
    csv = "a,b,junk,pred\n1,2,x,3\n4,5,y,6\n"
    ds = load_table(csv, {"pred": "prediction", "junk": "ignore"})
    assert ds.feature_names == ("a", "b")


def test_class_probability_columns_validated():
    n = 10
    good = build_dataset(
        {"f": np.arange(float(n))},
        {"yes": np.full(n, 0.4), "no": np.full(n, 0.6)},
    )
    assert set(good.predictions) == {"yes", "no"}
    with pytest.raises(SchemaError):
        build_dataset(
            {"f": np.arange(float(n))},
            {"yes": np.full(n, 1.4), "no": np.full(n, -0.4)},
        )


def test_prediction_label_syntax():
    csv = "f,p_survived,p_died\n1,0.7,0.3\n2,0.4,0.6\n"
    ds = load_table(csv, {"p_survived": "prediction:survived", "p_died": "prediction:died"})
    assert set(ds.predictions) == {"survived", "died"}
    assert ds.prediction_sources["survived"] == "p_survived"


def test_normalize_midpoint_constant_and_clamp():
    ds = build_dataset(
        {
            "mid": np.array([0.0, 10.0, 5.0]),
            "flat": np.array([3.0, 3.0, 3.0]),
            "r": np.array([10.0, 20.0, 15.0]),
        },
        {"p": np.zeros(3)},
    )
    assert normalize_value(ds.feature("mid"), 5.0) == 0.5
    assert normalize_value(ds.feature("flat"), 123.0) == 0.0
    # Out-of-range custom value clamps after mapping: (25-10)/10 = 1.5 -> 1.0.
    assert normalize_value(ds.feature("r"), 25.0) == 1.0
    assert normalize_value(ds.feature("r"), 5.0) == 0.0


def test_normalize_extremes_property():
    rng = np.random.default_rng(3)
    cols = {f"f{i}": rng.normal(size=50) * rng.uniform(0.1, 100) for i in range(5)}
    ds = build_dataset(cols, {"p": np.zeros(50)})
    for meta in ds.features:
        assert normalize_value(meta, meta.vmin) == 0.0
        assert normalize_value(meta, meta.vmax) == 1.0


def test_global_mean_matches_brute_force(mixed_ds):
    brute = sum(mixed_ds.predictions["prediction"]) / mixed_ds.n_rows
    assert abs(mixed_ds.global_means["prediction"] - brute) <= 1e-12 * abs(brute)


def test_impute_fills_missing_with_dataset_mean():
    ages = np.array([20.0, 30.0, 39.1])
    ds = build_dataset(
        {"age": ages, "size": np.array([1.0, 2.0, 3.0])},
        {"p": np.zeros(3)},
    )
    inst = impute_instance({"size": 2.0}, ds)
    # Independent recomputation of the column mean.
    expected_age = sum(ages) / len(ages)
    assert inst.values[ds.feature_index("age")] == pytest.approx(expected_age, abs=0)
    assert inst.imputed_features == {"age"}


def test_impute_complete_and_empty(toy_ds):
    full = impute_instance({"a": 1.0, "b": 0.0}, toy_ds)
    assert full.imputed_features == frozenset()
    empty = impute_instance({}, toy_ds)
    assert empty.imputed_features == {"a", "b"}
    assert np.allclose(empty.values, toy_ds.feature_means())


def test_impute_idempotent(toy_ds):
    first = impute_instance({"a": 3.0}, toy_ds)
    again = impute_instance(
        {name: float(v) for name, v in zip(toy_ds.feature_names, first.values)}, toy_ds
    )
    assert np.array_equal(first.values, again.values)
    assert again.imputed_features == frozenset()


def test_impute_unknown_feature_rejected(toy_ds):
    with pytest.raises(FeatureNotFoundError):
        impute_instance({"nope": 1.0}, toy_ds)


def test_instance_from_row(toy_ds):
    inst = instance_from_row(toy_ds, 2)
    assert inst.provenance == "dataset_row:2"
    assert np.array_equal(inst.values, toy_ds.matrix[2])
    with pytest.raises(FeatureNotFoundError):
        instance_from_row(toy_ds, 99)


def test_resolve_regression_target(toy_ds):
    target = resolve_target(toy_ds, TargetSpec(mode="regression"))
    assert target.label == "prediction"
    assert target.mean == 2.0


def test_resolve_classification_target():
    csv = "f,p_survived,p_died\n1,0.7,0.3\n2,0.4,0.6\n"
    ds = load_table(csv, {"p_survived": "prediction:survived", "p_died": "prediction:died"})
    target = resolve_target(ds, TargetSpec(mode="classification", class_label="survived"))
    assert target.label == "survived"
    assert target.mean == pytest.approx(0.55)
    with pytest.raises(TargetError) as err:
        resolve_target(ds, TargetSpec(mode="classification", class_label="frog"))
    assert set(err.value.detail["candidates"]) == {"survived", "died"}


def test_target_spec_invariants():
    with pytest.raises(TargetError):
        TargetSpec(mode="classification")
    with pytest.raises(TargetError):
        TargetSpec(mode="regression", class_label="x")
    with pytest.raises(TargetError):
        TargetSpec(mode="sorcery")


def test_config_threshold_respected():
    col = np.tile(np.arange(10.0), 5)
    cfg = EngineConfig(categorical_max_unique=5)
    ds = build_dataset({"v": col}, {"p": np.zeros(50)}, config=cfg)
    assert ds.feature("v").kind == "continuous"


def test_dataset_arrays_are_immutable(toy_ds):
    with pytest.raises(ValueError):
        toy_ds.matrix[0, 0] = 99.0
