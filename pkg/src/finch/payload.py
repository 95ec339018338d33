"""Self-contained view payloads: everything a client needs to draw one state.

A payload carries the aligned curve bundle (base, optional previous, current,
optional truth), the last step's effect decomposition, distribution heatmaps
for the x-axis and conditioning features, per-step subset diagnostics, the
instance marker, the mean line, and axis ranges.  Clients never need a second
query, and never receive raw dataset rows.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig
from .curves import (
    HIGHLIGHT_MODES,
    HIGHLIGHT_TRUTH_DEVIATION,
    AlignedCurve,
    CurveBundle,
    align_curves,
    compute_curve,
    default_highlight_mode,
    with_interaction_highlight,
)
from .distributions import feature_distribution
from .effects import (
    SCORE_KINDS,
    FeatureRanking,
    interaction_series,
    main_effect,
)
from .errors import ChainError, CurveError, ViewUnavailableError
from .subsets import SubsetChain
from .tabular import Dataset, InstanceVector, ResolvedTarget


@dataclass(frozen=True)
class ViewOptions:
    """Display toggles; none of them changes any statistic."""

    highlight_mode: str | None = None  # None = default for the chain depth
    smoothing_enabled: bool = True
    show_truth: bool = False
    show_uncertainty: bool = False
    show_interaction: bool = False
    ranking_score_kind: str = "interaction_at_instance"

    def validated(self, ds: Dataset) -> "ViewOptions":
        if self.highlight_mode is not None and self.highlight_mode not in HIGHLIGHT_MODES:
            raise CurveError(
                f"unknown highlight mode {self.highlight_mode!r}; "
                f"known modes: {list(HIGHLIGHT_MODES)}"
            )
        if self.ranking_score_kind not in SCORE_KINDS:
            raise ViewUnavailableError(
                f"unknown ranking score kind {self.ranking_score_kind!r}; "
                f"expected one of {list(SCORE_KINDS)}"
            )
        needs_truth = self.show_truth or self.highlight_mode == HIGHLIGHT_TRUTH_DEVIATION
        if needs_truth and ds.truth is None:
            raise ViewUnavailableError(
                "the truth view needs a ground-truth column, but none was loaded "
                "(assign the 'truth' role to a column)",
                detail={"missing": "truth"},
            )
        return self


def jsonable(obj):
    """Recursively convert arrays and numpy scalars; NaN becomes null."""
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


def dump_payload(payload: dict) -> bytes:
    """Canonical byte encoding: sorted keys, no whitespace."""
    return json.dumps(jsonable(payload), sort_keys=True, separators=(",", ":")).encode("utf-8")


def _curve_payload(aligned: AlignedCurve) -> dict:
    return {
        "values": aligned.values,
        "raw": aligned.raw,
        "dev": aligned.dev,
        "in_support": aligned.in_support,
        "source_column": aligned.source.source_column,
        "n_rows": int(aligned.source.count.sum()),
    }


def _heatmap_payload(hm) -> dict:
    return {
        "feature": hm.feature,
        "kind": hm.kind,
        "bin_edges": hm.bin_edges,
        "categories": hm.categories,
        "full_rel": hm.full_rel,
        "subset_rel": hm.subset_rel,
        "full_counts": hm.full_counts,
        "subset_counts": hm.subset_counts,
        "instance_bin": hm.instance_bin,
    }


def _axis_info(bundle: CurveBundle, extra: list[np.ndarray]) -> dict:
    series = [bundle.base.values, bundle.current.values, bundle.highlight + 0.0]
    if bundle.previous is not None:
        series.append(bundle.previous.values)
    if bundle.truth is not None:
        series.append(bundle.truth.values)
    series.extend(extra)
    stacked = np.concatenate([np.asarray(s, dtype=float).ravel() for s in series])
    stacked = stacked[np.isfinite(stacked)]
    lo = float(min(stacked.min(), bundle.center))
    hi = float(max(stacked.max(), bundle.center))
    return {
        "absolute": {"min": lo, "max": hi},
        "centered": {"min": lo - bundle.center, "max": hi - bundle.center},
    }


def build_chain_curves(
    ds: Dataset,
    chain: SubsetChain,
    target: ResolvedTarget,
    smoothing: bool,
    config: EngineConfig,
    cache: dict | None = None,
):
    """Base/previous/current dependence curves for the chain's current depth.

    ``cache`` maps (conditioning prefix, label, smoothing, instance
    fingerprint) to computed curves so view toggles do not recompute
    statistics.
    """
    column = np.asarray(target.values)
    fingerprint = chain.instance.fingerprint()

    def curve_for(depth: int):
        key = (
            chain.x_feature,
            chain.conditioning_features[:depth],
            target.label,
            smoothing,
            fingerprint,
        )
        if cache is not None and key in cache:
            return cache[key]
        curve = compute_curve(
            ds,
            chain.steps[depth].row_indices,
            chain.x_feature,
            column,
            center=target.mean,
            smoothing=smoothing,
            config=config,
        )
        if cache is not None:
            cache[key] = curve
        return curve

    depths = [0]
    if chain.depth >= 2:
        depths.append(chain.depth - 1)
    if chain.depth >= 1:
        depths.append(chain.depth)
    return [curve_for(d) for d in depths]


def build_view_payload(
    ds: Dataset,
    target: ResolvedTarget,
    chain: SubsetChain,
    view: ViewOptions,
    config: EngineConfig | None = None,
    cache: dict | None = None,
) -> dict:
    """Assemble the complete state of one dependence plot as plain data."""
    cfg = config or DEFAULT_CONFIG
    if chain is None:
        raise ChainError("no x-axis feature selected yet")
    view = view.validated(ds)
    x_meta = ds.feature(chain.x_feature)
    curves = build_chain_curves(ds, chain, target, view.smoothing_enabled, cfg, cache)

    truth_curve = None
    if view.show_truth:
        truth_curve = compute_curve(
            ds,
            chain.current.row_indices,
            chain.x_feature,
            ds.truth,
            source_column="truth",
            center=target.mean,
            smoothing=view.smoothing_enabled,
            config=cfg,
        )

    mode = view.highlight_mode or default_highlight_mode(len(curves))
    bundle = align_curves(
        curves,
        x_meta.kind,
        truth=truth_curve,
        highlight_mode=mode,
        center=target.mean,
    )

    decomposition = None
    if chain.depth >= 1:
        added = chain.conditioning_features[-1]
        a = main_effect(ds, added, chain.instance, np.asarray(target.values), cfg)
        dec = interaction_series(
            bundle, a, added, chain.instance.value_of(ds, chain.x_feature)
        )
        if view.show_interaction:
            bundle = with_interaction_highlight(bundle, dec.interaction)
        decomposition = {
            "feature": dec.feature,
            "main_effect": dec.main_effect,
            "main_line": dec.main_line,
            "interaction": dec.interaction,
            "instance_x_score": dec.instance_x_score,
        }

    payload_curves = {"base": _curve_payload(bundle.base)}
    if bundle.previous is not None:
        payload_curves["previous"] = _curve_payload(bundle.previous)
    if chain.depth >= 1:
        payload_curves["current"] = _curve_payload(bundle.current)
    if bundle.truth is not None:
        payload_curves["truth"] = _curve_payload(bundle.truth)

    uncertainty = None
    extra_axis: list[np.ndarray] = []
    if view.show_uncertainty:
        cur = bundle.current
        uncertainty = {"lower": cur.values - cur.dev, "upper": cur.values + cur.dev}
        extra_axis = [uncertainty["lower"], uncertainty["upper"]]

    truth_dev = None
    if bundle.truth is not None:
        truth_dev = bundle.current.values - bundle.truth.values

    dist_features = [chain.x_feature, *chain.conditioning_features]
    distributions = [
        _heatmap_payload(
            feature_distribution(ds, chain.current.row_indices, f, chain.instance, cfg)
        )
        for f in dist_features
    ]

    diagnostics = [
        {
            "features": list(step.similarity_features),
            "size": step.size,
            "thresholds": step.thresholds(),
            "max_distance": float(step.distances.max()) if step.size else 0.0,
        }
        for step in chain.steps
    ]

    return {
        "x_feature": chain.x_feature,
        "x_kind": x_meta.kind,
        "grid": bundle.grid,
        "curves": payload_curves,
        "highlight": {"mode": bundle.highlight_mode, "series": bundle.highlight},
        "uncertainty": uncertainty,
        "truth_deviation": truth_dev,
        "decomposition": decomposition,
        "distributions": distributions,
        "subset_diagnostics": diagnostics,
        "instance_marker": {
            "x": chain.instance.value_of(ds, chain.x_feature),
            "provenance": chain.instance.provenance,
            "imputed_features": chain.instance.imputed_features,
        },
        "mean_line": target.mean,
        "axes": _axis_info(bundle, extra_axis),
        "chain": {
            "x_feature": chain.x_feature,
            "conditioning_features": list(chain.conditioning_features),
        },
        "target": {
            "mode": target.spec.mode,
            "class_label": target.spec.class_label,
            "label": target.label,
            "display_name": target.display_name,
        },
        "view": asdict(view),
    }


def build_overview(
    ds: Dataset,
    target: ResolvedTarget,
    inst: InstanceVector,
    smoothing: bool = True,
    config: EngineConfig | None = None,
) -> dict:
    """One small-multiple (full-data curve + instance marker) per feature."""
    cfg = config or DEFAULT_CONFIG
    rows = np.arange(ds.n_rows)
    column = np.asarray(target.values)
    multiples = []
    for meta in ds.features:
        curve = compute_curve(
            ds,
            rows,
            meta.name,
            column,
            center=target.mean,
            smoothing=smoothing,
            config=cfg,
        )
        multiples.append(
            {
                "feature": meta.name,
                "kind": meta.kind,
                "x": curve.x,
                "mean": curve.mean,
                "smoothed": curve.smoothed,
                "instance_value": inst.value_of(ds, meta.name),
            }
        )
    return {
        "features": multiples,
        "mean_line": target.mean,
        "target": {
            "mode": target.spec.mode,
            "class_label": target.spec.class_label,
            "label": target.label,
            "display_name": target.display_name,
        },
        "instance": {
            "provenance": inst.provenance,
            "imputed_features": inst.imputed_features,
            "values": {n: float(v) for n, v in zip(ds.feature_names, inst.values)},
        },
    }


def ranking_payload(ranking: FeatureRanking) -> dict:
    entries = []
    for e in ranking.entries:
        entries.append(
            {
                "feature": e.feature,
                "score": e.score,
                "main_effect": e.main_effect,
                "preview": {"x": e.preview.x, "mean": e.preview.mean},
                "interaction_preview": {
                    "grid": e.decomposition.grid,
                    "main_line": e.decomposition.main_line,
                    "interaction": e.decomposition.interaction,
                },
            }
        )
    return {"score_kind": ranking.score_kind, "entries": entries}
