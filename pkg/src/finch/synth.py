"""Seeded synthetic tables with analytically known generating functions.

The generator writes fixtures for tests and for the mutation-based PDP
comparison, which needs to evaluate the true function on mutated rows.  A
sidecar ``<out>.meta.json`` records the function, seed, and columns so a
table stays self-describing.

Features are i.i.d. uniform on [0, 1], optionally quantized onto an L-level
grid; quantization keeps repeated x values so conditional means are
estimable instead of singleton groups.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_LEVELS = 25  # > categorical threshold, so quantized features stay continuous-kind
PREDICTION_COLUMN = "prediction"
TRUTH_COLUMN = "truth"

Term = tuple[float, tuple[str, ...]]  # coefficient, variable names (empty = constant)


@dataclass(frozen=True)
class FunctionSpec:
    """A polynomial over feature columns: sum of coefficient * product(vars)."""

    name: str
    terms: tuple[Term, ...]
    feature_names: tuple[str, ...]

    def evaluate(self, columns: dict[str, np.ndarray]) -> np.ndarray:
        n = next(iter(columns.values())).shape[0]
        out = np.zeros(n, dtype=np.float64)
        for coef, variables in self.terms:
            term = np.full(n, coef, dtype=np.float64)
            for v in variables:
                term = term * columns[v]
            out += term
        return out

    def predictor(self, feature_names: tuple[str, ...]):
        """Vectorized callable over a feature matrix (for the PDP oracle)."""
        index = {name: i for i, name in enumerate(feature_names)}

        def predict(matrix: np.ndarray) -> np.ndarray:
            cols = {name: matrix[:, index[name]] for name in self.feature_names}
            return self.evaluate(cols)

        return predict


def builtin_function(name: str, feature_names: tuple[str, ...] = ("x", "z")) -> FunctionSpec:
    a, b = feature_names[0], feature_names[1] if len(feature_names) > 1 else feature_names[0]
    if name == "constant":
        return FunctionSpec(name, ((1.0, ()),), feature_names)
    if name == "additive":
        return FunctionSpec(name, ((1.0, (a,)), (1.0, (b,))), feature_names)
    if name == "product":
        return FunctionSpec(name, ((1.0, (a,)), (1.0, (b,)), (1.0, (a, b))), feature_names)
    raise ValueError(f"unknown function {name!r}; expected constant | additive | product | custom-polynomial")


def parse_polynomial(expr: str, feature_names: tuple[str, ...]) -> FunctionSpec:
    """Parse ``"x:1,z:1,x*z:0.5,const:2"`` into a :class:`FunctionSpec`."""
    terms: list[Term] = []
    for chunk in expr.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            monomial, coef_text = chunk.rsplit(":", 1)
            coef = float(coef_text)
        else:
            monomial, coef = chunk, 1.0
        monomial = monomial.strip()
        if monomial in ("const", "1", ""):
            variables: tuple[str, ...] = ()
        else:
            variables = tuple(v.strip() for v in monomial.split("*"))
            unknown = sorted(set(variables) - set(feature_names))
            if unknown:
                raise ValueError(f"polynomial uses unknown features {unknown}")
        terms.append((coef, variables))
    if not terms:
        raise ValueError("polynomial has no terms")
    return FunctionSpec("custom-polynomial", tuple(terms), feature_names)


@dataclass(frozen=True, eq=False)
class SyntheticTable:
    feature_names: tuple[str, ...]
    matrix: np.ndarray
    prediction: np.ndarray
    truth: np.ndarray
    spec: FunctionSpec
    seed: int
    levels: int
    correlated_noise: float | None
    meta: dict = field(default_factory=dict)


def generate(
    spec: FunctionSpec,
    n: int,
    seed: int,
    levels: int = DEFAULT_LEVELS,
    quantize: tuple[str, ...] | None = None,
    correlated_noise: float | None = None,
) -> SyntheticTable:
    """Draw features, evaluate the function exactly, and mirror it as truth.

    ``quantize`` restricts the level grid to the named features (default:
    all).  ``correlated_noise`` ties the second feature to the first
    (z = clip(x + noise, 0, 1)), the setup where mutation-based curves create
    impossible rows and diverge from subset conditioning.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    names = spec.feature_names
    matrix = rng.random((n, len(names)))
    if correlated_noise is not None and len(names) >= 2:
        matrix[:, 1] = np.clip(matrix[:, 0] + rng.normal(0.0, correlated_noise, n), 0.0, 1.0)
    quantized = tuple(names if quantize is None else quantize)
    unknown = sorted(set(quantized) - set(names))
    if unknown:
        raise ValueError(f"cannot quantize unknown features {unknown}")
    if levels and levels > 1:
        for i, name in enumerate(names):
            if name in quantized:
                matrix[:, i] = np.round(matrix[:, i] * (levels - 1)) / (levels - 1)
    columns = {name: matrix[:, i] for i, name in enumerate(names)}
    prediction = spec.evaluate(columns)
    meta = {
        "function": spec.name,
        "terms": [[coef, list(vars_)] for coef, vars_ in spec.terms],
        "feature_names": list(names),
        "n": n,
        "seed": seed,
        "levels": levels,
        "quantize": list(quantized),
        "correlated_noise": correlated_noise,
        "prediction_column": PREDICTION_COLUMN,
        "truth_column": TRUTH_COLUMN,
    }
    return SyntheticTable(
        feature_names=names,
        matrix=matrix,
        prediction=prediction,
        truth=prediction.copy(),
        spec=spec,
        seed=seed,
        levels=levels,
        correlated_noise=correlated_noise,
        meta=meta,
    )


def to_csv(table: SyntheticTable) -> str:
    header = list(table.feature_names) + [PREDICTION_COLUMN, TRUTH_COLUMN]
    lines = [",".join(header)]
    for i in range(table.matrix.shape[0]):
        cells = [repr(float(v)) for v in table.matrix[i]]
        cells.append(repr(float(table.prediction[i])))
        cells.append(repr(float(table.truth[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def default_schema() -> dict[str, str]:
    return {PREDICTION_COLUMN: "prediction", TRUTH_COLUMN: "truth"}


def meta_path(csv_path: str | os.PathLike) -> str:
    return f"{csv_path}.meta.json"


def load_meta(csv_path: str | os.PathLike) -> dict | None:
    path = meta_path(csv_path)
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def spec_from_meta(meta: dict) -> FunctionSpec:
    terms = tuple((float(coef), tuple(vars_)) for coef, vars_ in meta["terms"])
    return FunctionSpec(meta["function"], terms, tuple(meta["feature_names"]))
