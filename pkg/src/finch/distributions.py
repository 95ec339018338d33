"""Relative-density heatmaps: how a subset is distributed versus the full data.

Each population (full data, subset) is normalized by its own maximum bin
count, so a 60-row subset stays visible next to a 60,000-row dataset: the
heatmap shows *where* the rows sit, not how many there are.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import EmptyDataError
from .tabular import CATEGORICAL, Dataset, InstanceVector


@dataclass(frozen=True, eq=False)
class DistributionHeatmap:
    feature: str
    kind: str
    bin_edges: np.ndarray | None  # continuous only, len = bins + 1
    categories: np.ndarray | None  # categorical only
    full_counts: np.ndarray
    subset_counts: np.ndarray
    full_rel: np.ndarray  # counts / max(counts), in [0, 1]
    subset_rel: np.ndarray
    instance_bin: int

    @property
    def n_bins(self) -> int:
        return int(self.full_counts.size)


def _relative(counts: np.ndarray) -> np.ndarray:
    peak = counts.max()
    if peak == 0:
        return np.zeros_like(counts, dtype=np.float64)
    return counts / peak


def feature_distribution(
    ds: Dataset,
    subset: np.ndarray,
    feature: str,
    inst: InstanceVector,
    config: EngineConfig | None = None,
) -> DistributionHeatmap:
    """Bin one feature for the full data and for ``subset``.

    Categorical features get one bin per category; continuous features get
    equal-width bins over the full-data range (last bin closed).  The
    instance is located by value, clamped into range for custom instances.
    """
    cfg = config or DEFAULT_CONFIG
    subset = np.asarray(subset, dtype=np.intp)
    if subset.size == 0:
        raise EmptyDataError("cannot characterize an empty subset")
    meta = ds.feature(feature)
    col = ds.column(feature)
    sub = col[subset]
    value = inst.value_of(ds, feature)

    if meta.kind == CATEGORICAL:
        cats = np.asarray(meta.categories, dtype=np.float64)
        full_counts = np.array([(col == c).sum() for c in cats], dtype=np.int64)
        subset_counts = np.array([(sub == c).sum() for c in cats], dtype=np.int64)
        instance_bin = int(np.argmin(np.abs(cats - value)))
        return DistributionHeatmap(
            feature=feature,
            kind=meta.kind,
            bin_edges=None,
            categories=cats,
            full_counts=full_counts,
            subset_counts=subset_counts,
            full_rel=_relative(full_counts),
            subset_rel=_relative(subset_counts),
            instance_bin=instance_bin,
        )

    edges = np.linspace(meta.vmin, meta.vmax, cfg.distribution_bins + 1)
    full_counts, _ = np.histogram(col, bins=edges)
    subset_counts, _ = np.histogram(sub, bins=edges)
    instance_bin = int(np.searchsorted(edges, value, side="right")) - 1
    instance_bin = min(max(instance_bin, 0), cfg.distribution_bins - 1)
    return DistributionHeatmap(
        feature=feature,
        kind=meta.kind,
        bin_edges=edges,
        categories=None,
        full_counts=full_counts.astype(np.int64),
        subset_counts=subset_counts.astype(np.int64),
        full_rel=_relative(full_counts),
        subset_rel=_relative(subset_counts),
        instance_bin=instance_bin,
    )
