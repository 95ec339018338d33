"""Dependence curves over real rows: grouped means, smoothing, alignment.

A curve is the mean of a value column grouped by the exact values of one
feature, computed over a row subset.  Continuous curves with more than the
categorical threshold of distinct values are smoothed with an exponentially
weighted average run forward and backward and averaged, with a span that
widens as the subset shrinks.  Alignment interpolates curves onto a shared
grid for comparison; interpolated values are display-side only and flagged
when they leave a curve's observed support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.signal import lfilter

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import CurveError, EmptyDataError, ViewUnavailableError
from .tabular import CATEGORICAL, CONTINUOUS, Dataset

HIGHLIGHT_BASE_VS_MEAN = "base_vs_mean"
HIGHLIGHT_BASE_VS_CURRENT = "base_vs_current"
HIGHLIGHT_PREVIOUS_VS_CURRENT = "previous_vs_current"
HIGHLIGHT_CURRENT_VS_BASE = "current_vs_base"
HIGHLIGHT_TRUTH_DEVIATION = "truth_deviation"
HIGHLIGHT_INTERACTION = "interaction"

HIGHLIGHT_MODES = (
    HIGHLIGHT_BASE_VS_MEAN,
    HIGHLIGHT_BASE_VS_CURRENT,
    HIGHLIGHT_PREVIOUS_VS_CURRENT,
    HIGHLIGHT_CURRENT_VS_BASE,
    HIGHLIGHT_TRUTH_DEVIATION,
    HIGHLIGHT_INTERACTION,
)


@dataclass(frozen=True, eq=False)
class DependenceCurve:
    """Per-x-value statistics of a value column over one row subset."""

    feature: str
    x: np.ndarray  # sorted distinct x values
    mean: np.ndarray  # raw group means
    smoothed: np.ndarray  # equals mean when smoothing is off or x is categorical
    dev: np.ndarray  # sample standard deviation (0 for singleton groups)
    dev_smoothed: np.ndarray  # dev through the same smoother, for display bands
    count: np.ndarray  # rows per group
    source_column: str  # "prediction" | "truth"
    centered_offset: float  # global mean used for mean-centered display

    @property
    def n_points(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True, eq=False)
class AlignedCurve:
    """A curve resampled onto a shared grid."""

    values: np.ndarray  # display series (smoothed) on the grid
    raw: np.ndarray  # raw means on the grid
    dev: np.ndarray  # display dev on the grid
    in_support: np.ndarray  # False where extrapolated / category missing
    source: DependenceCurve


@dataclass(frozen=True, eq=False)
class CurveBundle:
    """Base/previous/current (and optional truth) curves on one shared grid."""

    feature: str
    x_kind: str
    grid: np.ndarray
    base: AlignedCurve
    previous: AlignedCurve | None
    current: AlignedCurve  # identical to base when only one curve exists
    truth: AlignedCurve | None
    highlight_mode: str
    highlight: np.ndarray  # pointwise difference of the two curves named by the mode
    center: float


def smooth_series(
    values: np.ndarray,
    subset_n: int,
    full_n: int,
    enabled: bool = True,
    config: EngineConfig | None = None,
) -> np.ndarray:
    """Two exponentially weighted passes (forward and backward), averaged.

    Identity when disabled or when the series has at most the categorical
    threshold of points.  The span grows as sqrt(full_n / subset_n): smaller
    subsets carry more statistical noise and get relatively wider smoothing.
    """
    cfg = config or DEFAULT_CONFIG
    values = np.asarray(values, dtype=np.float64)
    n_points = values.size
    if not enabled or n_points <= cfg.categorical_max_unique:
        return values.copy()
    subset_n = max(1, int(subset_n))
    full_n = max(subset_n, int(full_n))
    raw_span = cfg.smoothing_span_scale * n_points * math.sqrt(full_n / subset_n)
    upper = max(cfg.smoothing_span_min, n_points / 2)
    span = min(max(float(round(raw_span)), cfg.smoothing_span_min), upper)
    alpha = 2.0 / (span + 1.0)
    forward = _ewm_pass(values, alpha)
    backward = _ewm_pass(values[::-1], alpha)[::-1]
    return (forward + backward) / 2.0


def _ewm_pass(values: np.ndarray, alpha: float) -> np.ndarray:
    # s[i] = alpha * v[i] + (1 - alpha) * s[i-1], seeded with s[0] = v[0];
    # lfilter runs the recursion in C, which matters for 100k-point curves.
    keep = 1.0 - alpha
    out, _ = lfilter([alpha], [1.0, -keep], values, zi=[keep * values[0]])
    return out


def compute_curve(
    ds: Dataset,
    rows: np.ndarray | Sequence[int],
    x_feature: str,
    column: np.ndarray,
    *,
    source_column: str = "prediction",
    center: float | None = None,
    smoothing: bool = True,
    config: EngineConfig | None = None,
) -> DependenceCurve:
    """Group ``column`` over ``rows`` by the exact values of ``x_feature``.

    Deviation is the sample standard deviation (two-pass, ddof=1; zero for
    singleton groups).  Smoothing applies only to continuous features and can
    be disabled wholesale.
    """
    cfg = config or DEFAULT_CONFIG
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise EmptyDataError("cannot compute a curve over an empty row subset")
    meta = ds.feature(x_feature)
    column = np.asarray(column, dtype=np.float64)

    x = ds.column(x_feature)[rows]
    y = column[rows]
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    grid, starts, counts = np.unique(xs, return_index=True, return_counts=True)
    means = np.add.reduceat(ys, starts) / counts

    centered = ys - np.repeat(means, counts)
    sq = np.add.reduceat(centered * centered, starts)
    dev = np.zeros_like(means)
    multi = counts > 1
    dev[multi] = np.sqrt(sq[multi] / (counts[multi] - 1))

    enabled = smoothing and meta.kind == CONTINUOUS
    smoothed = smooth_series(means, rows.size, ds.n_rows, enabled, cfg)
    dev_smoothed = smooth_series(dev, rows.size, ds.n_rows, enabled, cfg)

    if center is None:
        center = float(column.mean())
    return DependenceCurve(
        feature=x_feature,
        x=grid,
        mean=means,
        smoothed=smoothed,
        dev=dev,
        dev_smoothed=dev_smoothed,
        count=counts.astype(np.int64),
        source_column=source_column,
        centered_offset=float(center),
    )


def _align_one(curve: DependenceCurve, grid: np.ndarray, x_kind: str) -> AlignedCurve:
    if x_kind == CATEGORICAL:
        pos = np.searchsorted(curve.x, grid)
        pos_c = np.minimum(pos, curve.x.size - 1)
        present = curve.x[pos_c] == grid
        values = np.where(present, curve.smoothed[pos_c], np.nan)
        raw = np.where(present, curve.mean[pos_c], np.nan)
        dev = np.where(present, curve.dev_smoothed[pos_c], np.nan)
        return AlignedCurve(values=values, raw=raw, dev=dev, in_support=present, source=curve)
    values = np.interp(grid, curve.x, curve.smoothed)
    raw = np.interp(grid, curve.x, curve.mean)
    dev = np.interp(grid, curve.x, curve.dev_smoothed)
    in_support = (grid >= curve.x[0]) & (grid <= curve.x[-1])
    return AlignedCurve(values=values, raw=raw, dev=dev, in_support=in_support, source=curve)


def default_highlight_mode(n_curves: int) -> str:
    if n_curves <= 1:
        return HIGHLIGHT_BASE_VS_MEAN
    if n_curves == 2:
        return HIGHLIGHT_BASE_VS_CURRENT
    return HIGHLIGHT_PREVIOUS_VS_CURRENT


def _highlight_series(
    mode: str,
    base: AlignedCurve,
    previous: AlignedCurve | None,
    current: AlignedCurve,
    truth: AlignedCurve | None,
    center: float,
) -> np.ndarray:
    if mode == HIGHLIGHT_BASE_VS_MEAN:
        return base.values - center
    if mode in (HIGHLIGHT_BASE_VS_CURRENT, HIGHLIGHT_CURRENT_VS_BASE):
        return current.values - base.values
    if mode == HIGHLIGHT_PREVIOUS_VS_CURRENT:
        reference = previous if previous is not None else base
        return current.values - reference.values
    if mode == HIGHLIGHT_TRUTH_DEVIATION:
        if truth is None:
            raise ViewUnavailableError(
                "truth_deviation highlight requires a ground-truth curve",
                detail={"missing": "truth"},
            )
        return current.values - truth.values
    if mode == HIGHLIGHT_INTERACTION:
        raise CurveError(
            "interaction highlight is derived from an effect decomposition; "
            "build the bundle first and attach the decomposition"
        )
    raise CurveError(f"unknown highlight mode {mode!r}; known modes: {list(HIGHLIGHT_MODES)}")


def align_curves(
    curves: Sequence[DependenceCurve],
    x_kind: str,
    *,
    truth: DependenceCurve | None = None,
    highlight_mode: str | None = None,
    center: float | None = None,
) -> CurveBundle:
    """Resample curves onto their union grid and attach the highlight series.

    ``curves`` are ordered oldest to newest: ``[base]``, ``[base, current]``
    or ``[base, previous, current]``.  Older curves must be dropped by the
    caller; they are never part of a bundle.
    """
    curves = list(curves)
    if not 1 <= len(curves) <= 3:
        raise CurveError(f"a bundle holds 1 to 3 curves, got {len(curves)}")
    members = curves + ([truth] if truth is not None else [])
    feats = {c.feature for c in members}
    if len(feats) != 1:
        raise CurveError(f"curves span different x features: {sorted(feats)}")

    grid = members[0].x
    for c in members[1:]:
        grid = np.union1d(grid, c.x)

    aligned = [_align_one(c, grid, x_kind) for c in curves]
    base = aligned[0]
    current = aligned[-1]
    previous = aligned[1] if len(aligned) == 3 else None
    truth_aligned = _align_one(truth, grid, x_kind) if truth is not None else None

    if center is None:
        center = curves[-1].centered_offset
    mode = highlight_mode or default_highlight_mode(len(curves))
    series = _highlight_series(mode, base, previous, current, truth_aligned, center)
    return CurveBundle(
        feature=curves[0].feature,
        x_kind=x_kind,
        grid=grid,
        base=base,
        previous=previous,
        current=current,
        truth=truth_aligned,
        highlight_mode=mode,
        highlight=series,
        center=float(center),
    )


def with_interaction_highlight(bundle: CurveBundle, interaction: np.ndarray) -> CurveBundle:
    """Swap the bundle's highlight for an interaction series (current minus
    the main-effect line), preserving everything else."""
    if interaction.shape != bundle.grid.shape:
        raise CurveError("interaction series does not match the bundle grid")
    return replace(bundle, highlight_mode=HIGHLIGHT_INTERACTION, highlight=interaction)


def truth_deviation(bundle: CurveBundle) -> np.ndarray:
    """Pointwise prediction-minus-truth on the shared grid; positive means the
    model predicts above the observed outcome."""
    if bundle.truth is None:
        raise ViewUnavailableError(
            "no ground-truth curve in this bundle; load a truth column and enable the truth view",
            detail={"missing": "truth"},
        )
    return bundle.current.values - bundle.truth.values


def classic_pdp_oracle(
    ds: Dataset,
    predict: Callable[[np.ndarray], np.ndarray],
    feature: str,
    grid: np.ndarray | Sequence[float],
) -> DependenceCurve:
    """Mutation-based partial dependence, as a comparison oracle only.

    For each grid value, every row's ``feature`` is overwritten with that
    value and ``predict`` is averaged over all rows.  The engine itself never
    calls models; this exists to quantify how far subset conditioning and
    mutation-based curves diverge.
    """
    idx = ds.feature_index(feature)
    grid = np.asarray(grid, dtype=np.float64)
    work = ds.matrix.copy()
    n = ds.n_rows
    means = np.empty(grid.size, dtype=np.float64)
    devs = np.empty(grid.size, dtype=np.float64)
    for i, v in enumerate(grid):
        work[:, idx] = v
        preds = np.asarray(predict(work), dtype=np.float64)
        means[i] = preds.mean()
        devs[i] = preds.std(ddof=1) if n > 1 else 0.0
    counts = np.full(grid.size, n, dtype=np.int64)
    return DependenceCurve(
        feature=feature,
        x=grid,
        mean=means,
        smoothed=means.copy(),
        dev=devs,
        dev_smoothed=devs.copy(),
        count=counts,
        source_column="prediction",
        centered_offset=float(means.mean()),
    )
