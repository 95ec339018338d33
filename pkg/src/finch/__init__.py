"""Explain one prediction by walking real-data subsets, one feature at a time.

The engine turns a table of precomputed predictions into dependence curves
conditioned on incrementally refined row subsets around an instance, then
splits each refinement into a main effect and an interaction series.  No
model is ever executed and no synthetic rows are created: every statistic
comes from rows that exist in the data.
"""

from .config import CONFIG_ENV_VAR, DEFAULT_CONFIG, EngineConfig, load_config
from .curves import (
    CurveBundle,
    DependenceCurve,
    align_curves,
    classic_pdp_oracle,
    compute_curve,
    smooth_series,
    truth_deviation,
)
from .distributions import DistributionHeatmap, feature_distribution
from .effects import (
    EffectDecomposition,
    FeatureRanking,
    interaction_series,
    main_effect,
    rank_next_features,
)
from .errors import FinchError
from .subsets import (
    SubsetChain,
    SubsetSelection,
    extend_chain,
    instance_distance,
    new_chain,
    pop_chain,
    select_subset,
)
from .tabular import (
    Dataset,
    FeatureMeta,
    InstanceVector,
    TargetSpec,
    build_dataset,
    impute_instance,
    instance_from_row,
    load_table,
    normalize_value,
    resolve_target,
)

__version__ = "0.1.0"

__all__ = [
    "CONFIG_ENV_VAR",
    "DEFAULT_CONFIG",
    "CurveBundle",
    "Dataset",
    "DependenceCurve",
    "DistributionHeatmap",
    "EffectDecomposition",
    "EngineConfig",
    "FeatureMeta",
    "FeatureRanking",
    "FinchError",
    "InstanceVector",
    "SubsetChain",
    "SubsetSelection",
    "TargetSpec",
    "align_curves",
    "build_dataset",
    "classic_pdp_oracle",
    "compute_curve",
    "extend_chain",
    "feature_distribution",
    "impute_instance",
    "instance_distance",
    "instance_from_row",
    "interaction_series",
    "load_config",
    "load_table",
    "main_effect",
    "new_chain",
    "normalize_value",
    "pop_chain",
    "rank_next_features",
    "resolve_target",
    "select_subset",
    "smooth_series",
    "truth_deviation",
]
