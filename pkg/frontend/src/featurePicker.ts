/** Small-multiples picker for the next conditioning feature.
 *
 * Candidates appear in ranking order (strongest interaction at the
 * instance's x value first).  Each card holds a mini preview, toggling
 * between the standard dependence preview and the interaction-effect
 * preview.  Clicking a card dispatches exactly one add-feature command.
 */

import { LinearScale } from "./scale.js";
import { el, seriesPath } from "./svg.js";
import { theme } from "./theme.js";
import type { RankingEntry, RankingPayload, SeriesPoint } from "./types.js";

export type PreviewMode = "standard" | "interaction";

export interface FeaturePickerOptions {
  mode?: PreviewMode;
  onSelect: (feature: string) => void;
}

export function renderFeaturePicker(
  container: HTMLElement,
  ranking: RankingPayload,
  options: FeaturePickerOptions,
): void {
  container.replaceChildren();
  const mode = options.mode ?? "standard";
  container.setAttribute("data-preview-mode", mode);

  if (!ranking.entries.length) {
    const empty = document.createElement("div");
    empty.className = "picker-empty";
    empty.textContent = "No more features to add.";
    container.appendChild(empty);
    return;
  }

  const toggle = document.createElement("button");
  toggle.className = "picker-toggle";
  toggle.type = "button";
  toggle.textContent = mode === "standard" ? "Show interaction previews" : "Show standard previews";
  toggle.addEventListener("click", () => {
    renderFeaturePicker(container, ranking, {
      ...options,
      mode: mode === "standard" ? "interaction" : "standard",
    });
  });
  container.appendChild(toggle);

  const grid = document.createElement("div");
  grid.className = "picker-grid";
  for (const entry of ranking.entries) {
    grid.appendChild(candidateCard(entry, mode, options.onSelect));
  }
  container.appendChild(grid);
}

function candidateCard(
  entry: RankingEntry,
  mode: PreviewMode,
  onSelect: (feature: string) => void,
): HTMLElement {
  const card = document.createElement("button");
  card.type = "button";
  card.className = "picker-card";
  card.setAttribute("data-feature", entry.feature);
  card.addEventListener("click", () => onSelect(entry.feature));

  card.appendChild(mode === "standard" ? standardPreview(entry) : interactionPreview(entry));

  const caption = document.createElement("div");
  caption.className = "picker-caption";
  caption.textContent = `${entry.feature} (${entry.score.toFixed(3)})`;
  card.appendChild(caption);
  return card;
}

const W = 120;
const H = 60;

function miniSvg(cls: string): SVGElement {
  return el("svg", { viewBox: `0 0 ${W} ${H}`, width: W, height: H }, cls);
}

function defined(series: SeriesPoint[]): number[] {
  return series.filter((v): v is number => v !== null);
}

function standardPreview(entry: RankingEntry): SVGElement {
  const svg = miniSvg("picker-preview preview-standard");
  const ys = entry.preview.mean;
  const scale = previewScale(ys);
  const xs = ys.map((_, i) => (W * (i + 0.5)) / ys.length);
  svg.appendChild(
    el("path", {
      d: seriesPath(xs, ys.map((v) => scale.map(v))),
      stroke: theme.curve.current, fill: "none", "stroke-width": 1.5,
    }, "preview-line"),
  );
  return svg;
}

function interactionPreview(entry: RankingEntry): SVGElement {
  const svg = miniSvg("picker-preview preview-interaction");
  const interaction = entry.interaction_preview.interaction;
  const values = defined(interaction);
  if (!values.length) return svg;
  const scale = previewScale([...values, 0]);
  const xs = interaction.map((_, i) => (W * (i + 0.5)) / interaction.length);
  const zero = scale.map(0);
  svg.appendChild(el("line", { x1: 0, x2: W, y1: zero, y2: zero, stroke: theme.axis, "stroke-width": 0.5 }, "preview-zero"));
  svg.appendChild(
    el("path", {
      d: seriesPath(xs, interaction.map((v) => (v === null ? null : scale.map(v)))),
      stroke: theme.curve.mainEffect, fill: "none", "stroke-width": 1.5, "stroke-dasharray": "3 2",
    }, "preview-interaction-line"),
  );
  return svg;
}

function previewScale(values: number[]): LinearScale {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = 0.1 * (hi - lo || 1);
  return new LinearScale(lo - pad, hi + pad, H - 4, 4);
}
