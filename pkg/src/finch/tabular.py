"""Tabular data model: typed, normalized columns with precomputed predictions.

Predictions arrive as input columns and are never recomputed; the engine only
ever aggregates over rows that actually exist in the table.  Loading infers
per-feature metadata (categorical vs continuous, min-max normalization
parameters) and drops rows with missing values; only the explained instance
is ever imputed.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Mapping, TextIO

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import (
    EmptyDataError,
    FeatureNotFoundError,
    ParseError,
    SchemaError,
    TargetError,
    ViewUnavailableError,
)

CATEGORICAL = "categorical"
CONTINUOUS = "continuous"

ROLE_FEATURE = "feature"
ROLE_PREDICTION = "prediction"
ROLE_TRUTH = "truth"
ROLE_IGNORE = "ignore"


@dataclass(frozen=True)
class NormParams:
    """Min-max normalization: ``(raw - offset) / scale``; constant columns have scale 0."""

    offset: float
    scale: float


@dataclass(frozen=True)
class FeatureMeta:
    name: str
    kind: str  # CATEGORICAL | CONTINUOUS
    unique_count: int
    vmin: float
    vmax: float
    categories: tuple[float, ...] | None  # sorted by numeric encoding; categorical only
    norm: NormParams


@dataclass(frozen=True, eq=False)
class InstanceVector:
    """The instance under explanation: one value per feature, gaps mean-imputed."""

    values: np.ndarray  # (F,) aligned with Dataset.feature_names
    provenance: str  # "dataset_row:<i>" or "custom"
    imputed_features: frozenset[str] = field(default_factory=frozenset)

    def value_of(self, ds: "Dataset", name: str) -> float:
        return float(self.values[ds.feature_index(name)])

    def fingerprint(self) -> bytes:
        return self.values.tobytes()


@dataclass(frozen=True)
class TargetSpec:
    """What the y-axis means: a regression output or one class's probability."""

    mode: str  # "regression" | "classification"
    class_label: str | None = None
    display_name: str = ""

    def __post_init__(self):
        if self.mode not in ("regression", "classification"):
            raise TargetError(f"unknown target mode {self.mode!r}")
        if self.mode == "classification" and not self.class_label:
            raise TargetError("classification targets need a class_label")
        if self.mode == "regression" and self.class_label:
            raise TargetError("regression targets must not carry a class_label")


@dataclass(frozen=True)
class ResolvedTarget:
    """A concrete value column plus its global mean (the centering constant)."""

    spec: TargetSpec
    label: str
    values: np.ndarray
    mean: float

    @property
    def display_name(self) -> str:
        return self.spec.display_name or self.label


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable column table with feature metadata and prediction columns.

    All arrays are read-only; the normalized feature matrix is precomputed so
    distance computations are a column slice away.
    """

    feature_names: tuple[str, ...]
    features: tuple[FeatureMeta, ...]
    matrix: np.ndarray  # (N, F) float64
    normalized: np.ndarray  # (N, F) min-max normalized copy
    predictions: dict[str, np.ndarray]  # label -> column
    prediction_sources: dict[str, str]  # label -> original column name
    truth: np.ndarray | None
    truth_name: str | None
    global_means: dict[str, float]  # per prediction label (+ truth label if present)
    n_dropped: int = 0

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise FeatureNotFoundError(
                f"unknown feature {name!r}",
                detail={"feature": name, "known": list(self.feature_names)},
            ) from None

    def feature(self, name: str) -> FeatureMeta:
        return self.features[self.feature_index(name)]

    def column(self, name: str) -> np.ndarray:
        return self.matrix[:, self.feature_index(name)]

    def feature_means(self) -> np.ndarray:
        return self.matrix.mean(axis=0)

    def normalize(self, name: str, raw: float) -> float:
        return normalize_value(self.feature(name), raw)


def normalize_value(feature: FeatureMeta, raw: float) -> float:
    """Min-max map ``raw`` into [0, 1]; constant columns map to 0, out-of-range clamps."""
    if feature.norm.scale == 0.0:
        return 0.0
    v = (float(raw) - feature.norm.offset) / feature.norm.scale
    return min(1.0, max(0.0, v))


def _feature_meta(name: str, column: np.ndarray, config: EngineConfig) -> FeatureMeta:
    uniques = np.unique(column)
    vmin = float(uniques[0])
    vmax = float(uniques[-1])
    kind = CATEGORICAL if uniques.size <= config.categorical_max_unique else CONTINUOUS
    return FeatureMeta(
        name=name,
        kind=kind,
        unique_count=int(uniques.size),
        vmin=vmin,
        vmax=vmax,
        categories=tuple(float(v) for v in uniques) if kind == CATEGORICAL else None,
        norm=NormParams(offset=vmin, scale=vmax - vmin),
    )


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def build_dataset(
    feature_columns: Mapping[str, np.ndarray],
    predictions: Mapping[str, np.ndarray],
    truth: np.ndarray | None = None,
    truth_name: str | None = None,
    n_dropped: int = 0,
    config: EngineConfig | None = None,
) -> Dataset:
    """Assemble a :class:`Dataset` from already-parsed numeric columns."""
    cfg = config or DEFAULT_CONFIG
    if not predictions:
        raise SchemaError("at least one prediction column is required")
    names = tuple(feature_columns)
    if not names:
        raise SchemaError("at least one feature column is required")
    cols = [np.asarray(feature_columns[n], dtype=np.float64) for n in names]
    n = cols[0].shape[0]
    if n == 0:
        raise EmptyDataError("dataset has no rows")
    if any(c.shape != (n,) for c in cols):
        raise SchemaError("feature columns have inconsistent lengths")

    matrix = np.column_stack(cols)
    metas = tuple(_feature_meta(nm, matrix[:, i], cfg) for i, nm in enumerate(names))

    offsets = np.array([m.norm.offset for m in metas])
    scales = np.array([m.norm.scale for m in metas])
    safe = np.where(scales == 0.0, 1.0, scales)
    normalized = (matrix - offsets) / safe
    normalized[:, scales == 0.0] = 0.0

    pred_cols: dict[str, np.ndarray] = {}
    for label, col in predictions.items():
        arr = np.asarray(col, dtype=np.float64)
        if arr.shape != (n,):
            raise SchemaError(f"prediction column {label!r} has wrong length")
        pred_cols[label] = _freeze(arr.copy())
    if len(pred_cols) > 1:
        # Multiple prediction columns mean class probabilities.
        for label, arr in pred_cols.items():
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise SchemaError(
                    f"class-probability column {label!r} has values outside [0, 1]",
                    detail={"label": label, "min": float(arr.min()), "max": float(arr.max())},
                )

    truth_arr = None
    if truth is not None:
        truth_arr = np.asarray(truth, dtype=np.float64)
        if truth_arr.shape != (n,):
            raise SchemaError("truth column has wrong length")
        truth_arr = _freeze(truth_arr.copy())

    means = {label: float(arr.mean()) for label, arr in pred_cols.items()}
    if truth_arr is not None:
        means[truth_name or ROLE_TRUTH] = float(truth_arr.mean())

    return Dataset(
        feature_names=names,
        features=metas,
        matrix=_freeze(matrix),
        normalized=_freeze(normalized),
        predictions=pred_cols,
        prediction_sources={label: label for label in pred_cols},
        truth=truth_arr,
        truth_name=truth_name if truth_arr is not None else None,
        global_means=means,
        n_dropped=n_dropped,
    )


def _parse_role(column: str, role: str) -> tuple[str, str | None]:
    if role == ROLE_FEATURE or role == ROLE_TRUTH or role == ROLE_IGNORE:
        return role, None
    if role == ROLE_PREDICTION:
        return ROLE_PREDICTION, column
    if role.startswith(ROLE_PREDICTION + ":"):
        label = role.split(":", 1)[1].strip()
        if not label:
            raise SchemaError(f"empty prediction label in role {role!r} for column {column!r}")
        return ROLE_PREDICTION, label
    raise SchemaError(
        f"unknown role {role!r} for column {column!r}; "
        f"expected feature | prediction[:<label>] | truth | ignore"
    )


def _read_text(source) -> str:
    # Multi-line strings are inline CSV text; single-line strings are paths.
    if isinstance(source, str) and "\n" in source:
        return source.lstrip("﻿")
    if isinstance(source, (str, os.PathLike)):
        if not os.path.exists(source):
            raise ParseError(f"table file not found: {source!s}")
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8-sig")
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            return data.decode("utf-8-sig")
        return data.lstrip("﻿")
    raise ParseError(f"unsupported table source {type(source).__name__}")


def load_table(
    source: bytes | str | os.PathLike | BinaryIO | TextIO,
    schema: Mapping[str, str],
    config: EngineConfig | None = None,
) -> Dataset:
    """Parse a delimited table (comma separator, header row) into a :class:`Dataset`.

    ``schema`` maps column names to roles: ``feature`` (the default for
    columns not mentioned), ``prediction`` or ``prediction:<label>``,
    ``truth``, or ``ignore``.  Rows with a missing value in any role-assigned
    column are dropped; non-numeric cells raise :class:`ParseError` with the
    offending row and column.  Identical bytes yield an identical dataset.
    """
    cfg = config or DEFAULT_CONFIG
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDataError("table is empty") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise SchemaError(f"duplicate column names {dupes}")

    roles: dict[str, tuple[str, str | None]] = {}
    for col, role in schema.items():
        if col not in header:
            raise SchemaError(
                f"schema assigns a role to unknown column {col!r}",
                detail={"column": col, "header": header},
            )
        roles[col] = _parse_role(col, role)
    for col in header:
        roles.setdefault(col, (ROLE_FEATURE, None))

    feature_cols = [c for c in header if roles[c][0] == ROLE_FEATURE]
    pred_cols = [(c, roles[c][1]) for c in header if roles[c][0] == ROLE_PREDICTION]
    truth_cols = [c for c in header if roles[c][0] == ROLE_TRUTH]
    if not pred_cols:
        raise SchemaError("schema assigns no prediction column")
    if len(truth_cols) > 1:
        raise SchemaError(f"multiple truth columns {truth_cols}")
    labels = [label for _, label in pred_cols]
    if len(set(labels)) != len(labels):
        raise SchemaError(f"duplicate prediction labels {sorted(labels)}")
    if not feature_cols:
        raise SchemaError("schema leaves no feature columns")

    used = feature_cols + [c for c, _ in pred_cols] + truth_cols
    used_idx = {c: header.index(c) for c in used}

    parsed: list[list[float]] = []
    n_dropped = 0
    for line_no, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"row {line_no}: expected {len(header)} fields, found {len(row)}",
                detail={"row": line_no},
            )
        values = []
        missing = False
        for col in used:
            cell = row[used_idx[col]].strip()
            if cell == "":
                missing = True
                break
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"row {line_no}, column {col!r}: cannot parse {cell!r} as a number",
                    detail={"row": line_no, "column": col, "cell": cell},
                ) from None
            if math.isnan(v):
                missing = True
                break
            values.append(v)
        if missing:
            n_dropped += 1
            continue
        parsed.append(values)

    if not parsed:
        raise EmptyDataError(
            f"no usable rows (dropped {n_dropped} rows with missing values)"
        )

    data = np.array(parsed, dtype=np.float64)
    col_pos = {c: i for i, c in enumerate(used)}
    features = {c: data[:, col_pos[c]] for c in feature_cols}
    predictions = {label: data[:, col_pos[c]] for c, label in pred_cols}
    truth = data[:, col_pos[truth_cols[0]]] if truth_cols else None

    ds = build_dataset(
        features,
        predictions,
        truth=truth,
        truth_name=truth_cols[0] if truth_cols else None,
        n_dropped=n_dropped,
        config=cfg,
    )
    sources = {label: c for c, label in pred_cols}
    ds.prediction_sources.update(sources)
    return ds


def impute_instance(partial: Mapping[str, float], ds: Dataset) -> InstanceVector:
    """Complete a sparse instance: absent features get their dataset mean."""
    unknown = sorted(set(partial) - set(ds.feature_names))
    if unknown:
        raise FeatureNotFoundError(
            f"unknown features in instance: {unknown}",
            detail={"features": unknown, "known": list(ds.feature_names)},
        )
    means = ds.feature_means()
    values = np.empty(ds.n_features, dtype=np.float64)
    imputed = []
    for i, name in enumerate(ds.feature_names):
        if name in partial:
            values[i] = float(partial[name])
        else:
            values[i] = means[i]
            imputed.append(name)
    values.flags.writeable = False
    return InstanceVector(values=values, provenance="custom", imputed_features=frozenset(imputed))


def instance_from_row(ds: Dataset, index: int) -> InstanceVector:
    """Use dataset row ``index`` as the explained instance (nothing to impute)."""
    if not 0 <= index < ds.n_rows:
        raise FeatureNotFoundError(
            f"row index {index} out of range [0, {ds.n_rows})",
            detail={"index": index, "n_rows": ds.n_rows},
        )
    values = ds.matrix[index].copy()
    values.flags.writeable = False
    return InstanceVector(values=values, provenance=f"dataset_row:{index}", imputed_features=frozenset())


def resolve_target(ds: Dataset, spec: TargetSpec) -> ResolvedTarget:
    """Pick the value column whose mean defines the centering constant."""
    labels = list(ds.predictions)
    if spec.mode == "regression":
        if len(labels) != 1:
            raise TargetError(
                f"regression needs exactly one prediction column, found {labels}",
                detail={"candidates": labels},
            )
        label = labels[0]
    else:
        if spec.class_label not in ds.predictions:
            raise TargetError(
                f"unknown class {spec.class_label!r}; available classes: {labels}",
                detail={"class_label": spec.class_label, "candidates": labels},
            )
        label = spec.class_label
        col = ds.predictions[label]
        if col.min() < 0.0 or col.max() > 1.0:
            raise TargetError(
                f"column for class {label!r} is not a probability (values outside [0, 1])",
                detail={"label": label},
            )
    values = ds.predictions[label]
    return ResolvedTarget(spec=spec, label=label, values=values, mean=float(values.mean()))


def resolve_truth(ds: Dataset) -> ResolvedTarget:
    """The ground-truth column as a value column (for truth-sourced curves)."""
    if ds.truth is None:
        raise ViewUnavailableError(
            "no ground-truth column loaded; assign a 'truth' role at load time",
            detail={"missing": ROLE_TRUTH},
        )
    spec = TargetSpec(mode="regression", display_name=ds.truth_name or "truth")
    return ResolvedTarget(
        spec=spec,
        label=ds.truth_name or ROLE_TRUTH,
        values=ds.truth,
        mean=float(ds.truth.mean()),
    )
