import numpy as np
import pytest

from finch import build_dataset
from finch.synth import SyntheticTable, builtin_function, generate


def dataset_from_synth(table: SyntheticTable, truth: bool = True):
    columns = {name: table.matrix[:, i] for i, name in enumerate(table.feature_names)}
    return build_dataset(
        columns,
        {"prediction": table.prediction},
        truth=table.truth if truth else None,
        truth_name="truth" if truth else None,
    )


@pytest.fixture
def toy_ds():
    """Four rows, two features, constant prediction 2.0."""
    return build_dataset(
        {"a": np.array([0.0, 10.0, 5.0, 2.5]), "b": np.array([1.0, 1.0, 0.0, 0.0])},
        {"prediction": np.array([2.0, 2.0, 2.0, 2.0])},
    )


@pytest.fixture
def mixed_ds():
    """Categorical + continuous features with truth, small and hand-checkable."""
    rng = np.random.default_rng(42)
    n = 200
    cat = rng.integers(0, 3, n).astype(float)
    cont = rng.uniform(0.0, 10.0, n)
    pred = cat + 0.5 * cont
    truth = pred + 1.0
    return build_dataset(
        {"cat": cat, "cont": cont},
        {"prediction": pred},
        truth=truth,
        truth_name="outcome",
    )


@pytest.fixture
def additive_table():
    # x on an 11-level grid so conditional means are estimable; z continuous
    # so the near-identical band around the instance stays symmetric.
    return generate(builtin_function("additive"), n=10_000, seed=6, levels=11, quantize=("x",))


@pytest.fixture
def product_table():
    return generate(builtin_function("product"), n=10_000, seed=6, levels=11, quantize=("x",))
