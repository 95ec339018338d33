/** The main dependence plot: mean-centered curves over one feature.
 *
 * Layout, bottom of the y axis to the top: blue below-mean half, mean line,
 * red above-mean half; grey base curve, desaturated-purple previous curve,
 * purple current curve, dotted truth curve; signed highlight areas; green
 * instance marker; centered y axis left, absolute y axis right.
 */

import { LinearScale, formatTick, instanceX, xPositions } from "./scale.js";
import { bandPath, el, seriesPath, text } from "./svg.js";
import { theme } from "./theme.js";
import type { SeriesPoint, ViewPayload } from "./types.js";
import { PayloadError, highlightBand, signRuns, validatePayload } from "./viewModel.js";

export interface PlotLayout {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const defaultLayout: PlotLayout = {
  width: 640,
  height: 360,
  margin: { top: 16, right: 58, bottom: 30, left: 58 },
};

export function renderDependencePlot(
  container: HTMLElement,
  rawPayload: unknown,
  layout: PlotLayout = defaultLayout,
): void {
  container.replaceChildren();
  let payload: ViewPayload;
  try {
    payload = validatePayload(rawPayload);
    container.appendChild(buildSvg(payload, layout));
  } catch (err) {
    if (err instanceof PayloadError) {
      renderErrorState(container, err.message);
      return;
    }
    throw err;
  }
}

function renderErrorState(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const box = document.createElement("div");
  box.className = "plot-error";
  box.setAttribute("role", "alert");
  box.textContent = `Cannot render plot: ${message}`;
  container.appendChild(box);
}

function buildSvg(payload: ViewPayload, layout: PlotLayout): SVGElement {
  const { width, height, margin } = layout;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const yTop = margin.top;
  const yBottom = height - margin.bottom;

  const pad = 0.05 * (payload.axes.absolute.max - payload.axes.absolute.min || 1);
  const yScale = new LinearScale(
    payload.axes.absolute.min - pad,
    payload.axes.absolute.max + pad,
    yBottom,
    yTop,
  );
  const xs = xPositions(payload.grid, payload.x_kind, x0, x1);
  const toY = (v: SeriesPoint): number | null => (v === null ? null : yScale.map(v));

  const svg = el("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  }, "dependence-plot");
  svg.setAttribute("data-x-feature", payload.x_feature);

  // Background halves and +/- markers around the mean line.
  const meanY = yScale.map(payload.mean_line);
  svg.appendChild(
    el("rect", {
      x: x0, y: yTop, width: x1 - x0, height: Math.max(meanY - yTop, 0),
      fill: theme.aboveMean, opacity: theme.backgroundAboveOpacity,
    }, "background-above"),
  );
  svg.appendChild(
    el("rect", {
      x: x0, y: meanY, width: x1 - x0, height: Math.max(yBottom - meanY, 0),
      fill: theme.belowMean, opacity: theme.backgroundBelowOpacity,
    }, "background-below"),
  );
  svg.appendChild(text("+", { x: x1 - 12, y: yTop + 14, fill: theme.aboveMean }, "sign-above"));
  svg.appendChild(text("−", { x: x1 - 12, y: yBottom - 6, fill: theme.belowMean }, "sign-below"));

  // Highlight areas: red where compared sits above its reference, blue below.
  const band = highlightBand(payload);
  const upper = band.compared.map(toY);
  const lower = band.reference.map(toY);
  const highlightGroup = el("g", {}, "highlight-areas");
  highlightGroup.setAttribute("data-mode", payload.highlight.mode);
  for (const run of signRuns(lower, upper)) {
    // Screen coordinates flip the sign: smaller y = visually above.
    const d = bandPath(xs, upper, lower, run.from, run.to);
    if (!d) continue;
    highlightGroup.appendChild(
      el("path", {
        d,
        fill: run.above ? theme.belowMean : theme.aboveMean,
        opacity: theme.highlightOpacity,
      }, run.above ? "highlight-area highlight-below" : "highlight-area highlight-above"),
    );
  }
  svg.appendChild(highlightGroup);

  // Uncertainty band around the current curve.
  if (payload.uncertainty) {
    const d = bandPath(
      xs,
      payload.uncertainty.upper.map(toY),
      payload.uncertainty.lower.map(toY),
    );
    if (d) {
      svg.appendChild(
        el("path", {
          d, fill: theme.uncertainty.fill, opacity: theme.uncertainty.opacity,
        }, "uncertainty-band"),
      );
    }
  }

  // Mean line above the backgrounds, below the curves.
  svg.appendChild(
    el("line", {
      x1: x0, x2: x1, y1: meanY, y2: meanY,
      stroke: theme.meanLine, "stroke-width": 1.2,
    }, "mean-line"),
  );

  // Main-effect line (previous + constant shift) for the interaction view.
  if (payload.view.show_interaction && payload.decomposition) {
    svg.appendChild(
      el("path", {
        d: seriesPath(xs, payload.decomposition.main_line.map(toY)),
        stroke: theme.curve.mainEffect, fill: "none",
        "stroke-width": 1.4, "stroke-dasharray": "5 4",
      }, "curve-main-effect"),
    );
  }

  // Curves, oldest to newest so the current one paints on top.
  const roles: ["base", "previous", "current"] = ["base", "previous", "current"];
  for (const role of roles) {
    const curve = payload.curves[role];
    if (!curve) continue;
    svg.appendChild(
      el("path", {
        d: seriesPath(xs, curve.values.map(toY)),
        stroke: theme.curve[role], fill: "none",
        "stroke-width": role === "current" ? 2.2 : 1.6,
      }, `curve curve-${role}`),
    );
  }
  if (payload.curves.truth) {
    svg.appendChild(
      el("path", {
        d: seriesPath(xs, payload.curves.truth.values.map(toY)),
        stroke: theme.curve.truth, fill: "none",
        "stroke-width": 1.4, "stroke-dasharray": "3 3",
      }, "curve curve-truth"),
    );
  }

  // Instance marker: green vertical line at the instance's x value.
  const ix = instanceX(payload.grid, payload.x_kind, xs, payload.instance_marker.x);
  svg.appendChild(
    el("line", {
      x1: ix, x2: ix, y1: yTop, y2: yBottom,
      stroke: theme.instance, "stroke-width": 1.6,
    }, "instance-marker"),
  );

  // Dual y axes: centered values on the left, absolute on the right.
  const axes = el("g", {}, "axes");
  axes.appendChild(el("line", { x1: x0, x2: x0, y1: yTop, y2: yBottom, stroke: theme.axis }, "axis axis-centered"));
  axes.appendChild(el("line", { x1: x1, x2: x1, y1: yTop, y2: yBottom, stroke: theme.axis }, "axis axis-absolute"));
  for (const v of yScale.ticks(5)) {
    const y = yScale.map(v);
    axes.appendChild(
      text(formatTick(v - payload.mean_line), { x: x0 - 6, y: y + 3, "text-anchor": "end", fill: theme.axis, "font-size": 10 }, "tick tick-centered"),
    );
    axes.appendChild(
      text(formatTick(v), { x: x1 + 6, y: y + 3, "text-anchor": "start", fill: theme.axis, "font-size": 10 }, "tick tick-absolute"),
    );
  }
  // Sparse x labels: first, instance-nearest, last.
  const labelIdx = [0, Math.floor(payload.grid.length / 2), payload.grid.length - 1];
  for (const i of new Set(labelIdx)) {
    axes.appendChild(
      text(formatTick(payload.grid[i]), { x: xs[i], y: yBottom + 14, "text-anchor": "middle", fill: theme.axis, "font-size": 10 }, "tick tick-x"),
    );
  }
  svg.appendChild(axes);
  return svg;
}
