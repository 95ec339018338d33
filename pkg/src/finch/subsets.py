"""Similarity-based row selection: the subsets that condition each curve.

A subset for conditioning features F is the union of three rules over
normalized Euclidean distance to the explained instance: the top 5 % most
similar rows, at least the 50 most similar rows, and every row closer than
0.1 per feature dimension (near-identical, the rule that keeps categorical
matches complete).  Selection is an exact scan; ties on the frontier break
toward lower row index so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import ChainError
from .tabular import Dataset, InstanceVector, normalize_value


@dataclass(frozen=True, eq=False)
class SubsetSelection:
    """Rows conditioning one curve, ordered by ascending (distance, row index)."""

    row_indices: np.ndarray  # intp, frontier order
    distances: np.ndarray  # aligned with row_indices
    similarity_features: tuple[str, ...]
    pct_count: int  # ceil(share * N)
    min_count: int  # min(N, floor)
    near_identical_cutoff: float

    @property
    def size(self) -> int:
        return int(self.row_indices.size)

    def thresholds(self) -> dict:
        return {
            "pct_count": self.pct_count,
            "min_count": self.min_count,
            "near_identical_cutoff": self.near_identical_cutoff,
        }


@dataclass(frozen=True, eq=False)
class SubsetChain:
    """Ordered conditioning features plus the cached selection for each prefix.

    ``steps[k]`` holds the subset for the first ``k`` conditioning features;
    ``steps[0]`` is always the full dataset.
    """

    dataset: Dataset
    x_feature: str
    instance: InstanceVector
    conditioning_features: tuple[str, ...]
    steps: tuple[SubsetSelection, ...]
    config: EngineConfig

    @property
    def depth(self) -> int:
        return len(self.conditioning_features)

    @property
    def current(self) -> SubsetSelection:
        return self.steps[-1]

    @property
    def previous(self) -> SubsetSelection | None:
        return self.steps[-2] if len(self.steps) >= 2 else None


def _normalized_instance(ds: Dataset, inst: InstanceVector, idx: np.ndarray) -> np.ndarray:
    vals = np.array(
        [normalize_value(ds.features[i], inst.values[i]) for i in idx],
        dtype=np.float64,
    )
    return vals


def distances_to_instance(
    ds: Dataset, inst: InstanceVector, feats: Sequence[str]
) -> np.ndarray:
    """Normalized Euclidean distance from every dataset row to the instance."""
    if not feats:
        return np.zeros(ds.n_rows, dtype=np.float64)
    idx = np.array([ds.feature_index(f) for f in feats], dtype=np.intp)
    ref = _normalized_instance(ds, inst, idx)
    diff = ds.normalized[:, idx] - ref
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def instance_distance(
    ds: Dataset, inst: InstanceVector, row: np.ndarray, feats: Sequence[str]
) -> float:
    """Distance between the instance and one raw feature row over ``feats``."""
    if not feats:
        raise ValueError("instance_distance requires at least one feature")
    total = 0.0
    for f in feats:
        i = ds.feature_index(f)
        a = normalize_value(ds.features[i], inst.values[i])
        b = normalize_value(ds.features[i], float(row[i]))
        total += (a - b) ** 2
    return math.sqrt(total)


def _ceil_share(share: float, n: int) -> int:
    # Guard against float artifacts: 0.05 * 1000 is 50.00000000000001 in IEEE,
    # which must still count as exactly 50 rows.
    return int(math.ceil(round(share * n, 9)))


def select_subset(
    ds: Dataset,
    feats: Sequence[str],
    inst: InstanceVector,
    config: EngineConfig | None = None,
) -> SubsetSelection:
    """Union of the three selection rules; empty ``feats`` selects every row."""
    cfg = config or DEFAULT_CONFIG
    feats = tuple(feats)
    n = ds.n_rows
    d = distances_to_instance(ds, inst, feats)
    pct_count = _ceil_share(cfg.subset_share, n)
    min_count = min(n, cfg.subset_min_rows)
    cutoff = cfg.near_identical_per_feature * len(feats)

    if not feats:
        order = np.arange(n, dtype=np.intp)
        return SubsetSelection(
            row_indices=order,
            distances=d,
            similarity_features=feats,
            pct_count=pct_count,
            min_count=min_count,
            near_identical_cutoff=cutoff,
        )

    frontier = min(n, max(pct_count, min_count))
    take = max(frontier, int((d <= cutoff).sum()))
    if take >= n:
        rows = np.arange(n, dtype=np.intp)
    else:
        # Partial selection, then an explicit tie-break at the boundary value
        # so equal distances resolve toward lower row indices.
        part = np.argpartition(d, take - 1)[:take]
        boundary = d[part].max()
        strict = np.flatnonzero(d < boundary)
        ties = np.flatnonzero(d == boundary)
        rows = np.concatenate([strict, ties[: take - strict.size]])
    order = rows[np.lexsort((rows, d[rows]))].astype(np.intp)
    return SubsetSelection(
        row_indices=order,
        distances=d[order],
        similarity_features=feats,
        pct_count=pct_count,
        min_count=min_count,
        near_identical_cutoff=cutoff,
    )


def new_chain(
    ds: Dataset,
    x_feature: str,
    inst: InstanceVector,
    config: EngineConfig | None = None,
) -> SubsetChain:
    """Start a chain: x-axis feature fixed, no conditioning yet (full dataset)."""
    cfg = config or DEFAULT_CONFIG
    ds.feature_index(x_feature)  # existence check
    step0 = select_subset(ds, (), inst, cfg)
    return SubsetChain(
        dataset=ds,
        x_feature=x_feature,
        instance=inst,
        conditioning_features=(),
        steps=(step0,),
        config=cfg,
    )


def extend_chain(chain: SubsetChain, feat: str) -> SubsetChain:
    """Add a conditioning feature; the new subset is re-selected from the full
    dataset with joint similarity over all conditioning features."""
    if feat == chain.x_feature:
        raise ChainError(
            f"{feat!r} is the x-axis feature and cannot condition the subset",
            detail={"feature": feat},
        )
    if feat in chain.conditioning_features:
        raise ChainError(
            f"{feat!r} is already part of the chain",
            detail={"feature": feat, "chain": list(chain.conditioning_features)},
        )
    chain.dataset.feature_index(feat)  # existence check
    feats = chain.conditioning_features + (feat,)
    step = select_subset(chain.dataset, feats, chain.instance, chain.config)
    return SubsetChain(
        dataset=chain.dataset,
        x_feature=chain.x_feature,
        instance=chain.instance,
        conditioning_features=feats,
        steps=chain.steps + (step,),
        config=chain.config,
    )


def pop_chain(chain: SubsetChain) -> SubsetChain:
    """Remove the last conditioning feature; earlier selections are reused."""
    if not chain.conditioning_features:
        raise ChainError("chain has no conditioning features to remove")
    return SubsetChain(
        dataset=chain.dataset,
        x_feature=chain.x_feature,
        instance=chain.instance,
        conditioning_features=chain.conditioning_features[:-1],
        steps=chain.steps[:-1],
        config=chain.config,
    )
