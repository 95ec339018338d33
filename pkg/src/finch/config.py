"""Engine configuration.

The heuristic constants (subset share, minimum subset size, near-identical
cutoff, bin count, smoothing span rule) were chosen experimentally and are
exposed here so deployments can override them.  ``load_config`` honours the
``FINCH_CONFIG`` environment variable, which may point at a JSON file whose
keys override individual fields.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

CONFIG_ENV_VAR = "FINCH_CONFIG"


@dataclass(frozen=True)
class EngineConfig:
    # Subset selection: top share of most-similar rows, floor on subset size,
    # and the per-feature distance below which a row counts as near-identical.
    subset_share: float = 0.05
    subset_min_rows: int = 50
    near_identical_per_feature: float = 0.1

    # Features with at most this many distinct values are categorical/ordinal
    # and are never smoothed.
    categorical_max_unique: int = 24

    # Equal-width bins for continuous distribution heatmaps.
    distribution_bins: int = 20

    # Exponentially weighted smoothing: span = clamp(round(span_scale * P *
    # sqrt(full_n / subset_n)), span_min, max(span_min, P / 2)).
    smoothing_span_scale: float = 0.1
    smoothing_span_min: float = 3.0

    # Thread count for ranking candidate features; 1 = sequential.
    ranking_workers: int = 1


DEFAULT_CONFIG = EngineConfig()


def load_config(path: str | os.PathLike | None = None) -> EngineConfig:
    """Build an :class:`EngineConfig`, overriding defaults from a JSON file.

    ``path`` wins over the ``FINCH_CONFIG`` environment variable; with
    neither, the defaults are returned.  Unknown keys in the file are
    rejected so typos do not silently fall back to defaults.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return DEFAULT_CONFIG
    with open(path, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError(f"config file {path!s} must contain a JSON object")
    known = {f.name for f in fields(EngineConfig)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ValueError(f"unknown config keys {unknown}; known keys: {sorted(known)}")
    return replace(DEFAULT_CONFIG, **overrides)
