"""Main-vs-interaction decomposition of each incremental step, and ranking.

Adding a conditioning feature Z moves the curve by a constant main effect
(how Z alone shifts the mean prediction) plus an interaction series (how Z
changes the *shape* of the curve, i.e. how it plays together with the x-axis
feature and earlier conditions).  The interaction series is defined as the
exact residual, so current = previous + main + interaction holds pointwise by
construction.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .curves import CurveBundle, DependenceCurve, align_curves, compute_curve
from .errors import EffectError
from .subsets import SubsetChain, select_subset
from .tabular import Dataset, InstanceVector

SCORE_INTERACTION = "interaction_at_instance"
SCORE_TOTAL_CHANGE = "total_change_at_instance"
SCORE_KINDS = (SCORE_INTERACTION, SCORE_TOTAL_CHANGE)


@dataclass(frozen=True, eq=False)
class EffectDecomposition:
    """current = previous + main_effect + interaction, pointwise on the grid."""

    feature: str  # the newly added conditioning feature
    main_effect: float
    main_line: np.ndarray  # previous curve shifted by the main effect
    interaction: np.ndarray  # residual series on the grid
    instance_x_score: float  # |interaction| at the grid point nearest the instance
    grid: np.ndarray


@dataclass(frozen=True, eq=False)
class RankedFeature:
    feature: str
    score: float
    preview: DependenceCurve  # raw candidate curve (unsmoothed)
    main_effect: float
    decomposition: EffectDecomposition


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple[RankedFeature, ...]
    score_kind: str


def main_effect(
    ds: Dataset,
    feature: str,
    inst: InstanceVector,
    column: np.ndarray,
    config: EngineConfig | None = None,
) -> float:
    """Mean of the value column over the subset conditioned on ``feature``
    alone, relative to the global mean.  Depends only on the feature, the
    instance, and the data; never on the x axis or earlier chain steps."""
    cfg = config or DEFAULT_CONFIG
    column = np.asarray(column, dtype=np.float64)
    sel = select_subset(ds, (feature,), inst, cfg)
    return float(column[sel.row_indices].mean() - column.mean())


def _nearest_defined(grid: np.ndarray, series: np.ndarray, x_value: float) -> int | None:
    gaps = np.abs(grid - x_value)
    gaps = np.where(np.isfinite(series), gaps, np.inf)
    idx = int(np.argmin(gaps))
    if not np.isfinite(series[idx]):
        return None
    return idx


def interaction_series(
    bundle: CurveBundle,
    main: float,
    feature: str,
    instance_x: float,
) -> EffectDecomposition:
    """Split the bundle's last step into main and interaction components.

    The reference curve is the bundle's previous curve, or the base curve
    when only one conditioning feature exists.  Undefined for a bundle with a
    single curve: there is no step to decompose.
    """
    if bundle.current is bundle.base:
        raise EffectError(
            "effect decomposition is undefined before any conditioning feature is added"
        )
    reference = bundle.previous if bundle.previous is not None else bundle.base
    interaction = bundle.current.values - reference.values - main
    main_line = reference.values + main
    idx = _nearest_defined(bundle.grid, interaction, instance_x)
    score = abs(float(interaction[idx])) if idx is not None else 0.0
    return EffectDecomposition(
        feature=feature,
        main_effect=float(main),
        main_line=main_line,
        interaction=interaction,
        instance_x_score=score,
        grid=bundle.grid,
    )


def _score_candidate(
    ds: Dataset,
    chain: SubsetChain,
    inst: InstanceVector,
    column: np.ndarray,
    prev_curve: DependenceCurve,
    candidate: str,
    score_kind: str,
    cfg: EngineConfig,
) -> RankedFeature:
    feats = chain.conditioning_features + (candidate,)
    sel = select_subset(ds, feats, inst, cfg)
    current = compute_curve(
        ds, sel.row_indices, chain.x_feature, column, smoothing=False, config=cfg
    )
    x_kind = ds.feature(chain.x_feature).kind
    bundle = align_curves([prev_curve, current], x_kind)
    main = main_effect(ds, candidate, inst, column, cfg)
    instance_x = inst.value_of(ds, chain.x_feature)
    dec = interaction_series(bundle, main, candidate, instance_x)
    if score_kind == SCORE_INTERACTION:
        score = dec.instance_x_score
    else:
        change = bundle.current.values - bundle.base.values
        idx = _nearest_defined(bundle.grid, change, instance_x)
        score = abs(float(change[idx])) if idx is not None else 0.0
    return RankedFeature(
        feature=candidate,
        score=score,
        preview=current,
        main_effect=main,
        decomposition=dec,
    )


def rank_next_features(
    ds: Dataset,
    chain: SubsetChain,
    inst: InstanceVector,
    column: np.ndarray,
    score_kind: str = SCORE_INTERACTION,
    *,
    workers: int | None = None,
    config: EngineConfig | None = None,
) -> FeatureRanking:
    """Score every not-yet-chained feature by tentatively adding it.

    Scores use raw (unsmoothed) group means so the smoother cannot reorder
    near-tied candidates; ordering is score-descending with name ascending as
    the tie break, independent of evaluation schedule.
    """
    cfg = config or DEFAULT_CONFIG
    if score_kind not in SCORE_KINDS:
        raise EffectError(
            f"unknown score kind {score_kind!r}; expected one of {list(SCORE_KINDS)}"
        )
    column = np.asarray(column, dtype=np.float64)
    taken = {chain.x_feature, *chain.conditioning_features}
    candidates = [f for f in ds.feature_names if f not in taken]
    if not candidates:
        return FeatureRanking(entries=(), score_kind=score_kind)

    prev_curve = compute_curve(
        ds,
        chain.current.row_indices,
        chain.x_feature,
        column,
        smoothing=False,
        config=cfg,
    )

    def evaluate(name: str) -> RankedFeature:
        return _score_candidate(ds, chain, inst, column, prev_curve, name, score_kind, cfg)

    n_workers = workers if workers is not None else cfg.ranking_workers
    if n_workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            entries = list(pool.map(evaluate, candidates))
    else:
        entries = [evaluate(name) for name in candidates]

    entries.sort(key=lambda e: (-e.score, e.feature))
    return FeatureRanking(entries=tuple(entries), score_kind=score_kind)
