/** Distribution heatmap strips: where the subset sits versus everyone.
 *
 * Cell brightness encodes each population's relative count (its own maximum
 * is full brightness), so a small subset never fades next to the full data.
 * The x-axis feature's strip goes directly below the main plot; strips for
 * the conditioning features form a side panel.
 */

import { el, text } from "./svg.js";
import { theme } from "./theme.js";
import type { DistributionPayload, ViewPayload } from "./types.js";

const STRIP_WIDTH = 640;
const ROW_HEIGHT = 14;
const LABEL_WIDTH = 90;

export function renderDistributionHeatmaps(container: HTMLElement, payload: ViewPayload): void {
  container.replaceChildren();
  if (!payload.distributions.length) return;

  const [xDist, ...conditioning] = payload.distributions;
  const below = document.createElement("div");
  below.className = "strip-x";
  below.appendChild(stripSvg(xDist));
  container.appendChild(below);

  if (conditioning.length) {
    const side = document.createElement("div");
    side.className = "strip-side";
    for (const dist of conditioning) {
      side.appendChild(stripSvg(dist));
    }
    container.appendChild(side);
  }
}

function stripSvg(dist: DistributionPayload): SVGElement {
  const bins = dist.full_rel.length;
  const height = ROW_HEIGHT * 2 + 16;
  const svg = el("svg", {
    viewBox: `0 0 ${STRIP_WIDTH} ${height}`,
    width: STRIP_WIDTH,
    height,
  }, "distribution-strip");
  svg.setAttribute("data-feature", dist.feature);

  svg.appendChild(
    text(dist.feature, { x: 0, y: ROW_HEIGHT + 4, "font-size": 10, fill: theme.axis }, "strip-label"),
  );

  const cellWidth = (STRIP_WIDTH - LABEL_WIDTH) / bins;
  const both: [string, number[]][] = [["full", dist.full_rel], ["subset", dist.subset_rel]];
  both.forEach(([name, rel], rowIdx) => {
    const y = rowIdx * ROW_HEIGHT + 2;
    for (let i = 0; i < bins; i++) {
      svg.appendChild(
        el("rect", {
          x: LABEL_WIDTH + i * cellWidth,
          y,
          width: Math.max(cellWidth - 0.5, 0.5),
          height: ROW_HEIGHT - 2,
          fill: theme.heat,
          opacity: Math.max(rel[i], 0.02),
        }, `heat-cell heat-${name}`),
      );
    }
  });

  // Green instance marker over the instance's bin, spanning both rows.
  const markerX = LABEL_WIDTH + (dist.instance_bin + 0.5) * cellWidth;
  svg.appendChild(
    el("line", {
      x1: markerX, x2: markerX, y1: 0, y2: ROW_HEIGHT * 2 + 2,
      stroke: theme.instance, "stroke-width": 1.6,
    }, "strip-instance-marker"),
  );
  return svg;
}
