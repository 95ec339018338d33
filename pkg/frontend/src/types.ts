/** Wire types for the explanation service (see docs/payload_schema.md). */

export type SeriesPoint = number | null;

export interface CurvePayload {
  values: SeriesPoint[];
  raw: SeriesPoint[];
  dev: SeriesPoint[];
  in_support: boolean[];
  source_column: "prediction" | "truth";
  n_rows: number;
}

export type HighlightMode =
  | "base_vs_mean"
  | "base_vs_current"
  | "previous_vs_current"
  | "current_vs_base"
  | "truth_deviation"
  | "interaction";

export interface Decomposition {
  feature: string;
  main_effect: number;
  main_line: SeriesPoint[];
  interaction: SeriesPoint[];
  instance_x_score: number;
}

export interface DistributionPayload {
  feature: string;
  kind: "categorical" | "continuous";
  bin_edges: number[] | null;
  categories: number[] | null;
  full_rel: number[];
  subset_rel: number[];
  full_counts: number[];
  subset_counts: number[];
  instance_bin: number;
}

export interface SubsetDiagnostics {
  features: string[];
  size: number;
  thresholds: { pct_count: number; min_count: number; near_identical_cutoff: number };
  max_distance: number;
}

export interface ViewOptions {
  highlight_mode: HighlightMode | null;
  smoothing_enabled: boolean;
  show_truth: boolean;
  show_uncertainty: boolean;
  show_interaction: boolean;
  ranking_score_kind: string;
}

export interface ViewPayload {
  x_feature: string;
  x_kind: "categorical" | "continuous";
  grid: number[];
  curves: {
    base: CurvePayload;
    previous?: CurvePayload;
    current?: CurvePayload;
    truth?: CurvePayload;
  };
  highlight: { mode: HighlightMode; series: SeriesPoint[] };
  uncertainty: { lower: SeriesPoint[]; upper: SeriesPoint[] } | null;
  truth_deviation: SeriesPoint[] | null;
  decomposition: Decomposition | null;
  distributions: DistributionPayload[];
  subset_diagnostics: SubsetDiagnostics[];
  instance_marker: { x: number; provenance: string; imputed_features: string[] };
  mean_line: number;
  axes: {
    absolute: { min: number; max: number };
    centered: { min: number; max: number };
  };
  chain: { x_feature: string; conditioning_features: string[] };
  target: { mode: string; class_label: string | null; label: string; display_name: string };
  view: ViewOptions;
}

export interface RankingEntry {
  feature: string;
  score: number;
  main_effect: number;
  preview: { x: number[]; mean: number[] };
  interaction_preview: {
    grid: number[];
    main_line: SeriesPoint[];
    interaction: SeriesPoint[];
  };
}

export interface RankingPayload {
  score_kind: string;
  entries: RankingEntry[];
}

export interface StateSummary {
  session_id: string;
  dataset_id: string;
  x_feature: string | null;
  conditioning_features: string[];
  subset_sizes: number[];
  view: ViewOptions;
}
