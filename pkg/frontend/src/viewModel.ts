/** Payload validation and derived geometry inputs.
 *
 * The client never computes statistics: everything below only checks shape
 * and picks which payload arrays the current highlight mode refers to.
 */

import type { SeriesPoint, ViewPayload } from "./types.js";

export class PayloadError extends Error {}

function isArray(v: unknown): v is unknown[] {
  return Array.isArray(v);
}

export function validatePayload(raw: unknown): ViewPayload {
  if (typeof raw !== "object" || raw === null) {
    throw new PayloadError("payload is not an object");
  }
  const p = raw as Partial<ViewPayload>;
  if (!isArray(p.grid) || p.grid.length === 0) throw new PayloadError("payload has no grid");
  if (!p.curves || typeof p.curves !== "object" || !p.curves.base) {
    throw new PayloadError("payload has no base curve");
  }
  if (typeof p.mean_line !== "number") throw new PayloadError("payload has no mean line");
  if (!p.highlight || !isArray(p.highlight.series)) {
    throw new PayloadError("payload has no highlight series");
  }
  if (!p.axes || !p.axes.absolute) throw new PayloadError("payload has no axis info");
  if (!p.instance_marker || typeof p.instance_marker.x !== "number") {
    throw new PayloadError("payload has no instance marker");
  }
  for (const [role, curve] of Object.entries(p.curves)) {
    if (!curve || !isArray(curve.values) || curve.values.length !== p.grid.length) {
      throw new PayloadError(`curve ${role} does not match the grid`);
    }
  }
  return p as ViewPayload;
}

export interface HighlightBand {
  reference: SeriesPoint[];
  compared: SeriesPoint[];
}

/** The two series the highlight area spans, per mode. */
export function highlightBand(payload: ViewPayload): HighlightBand {
  const { curves, highlight, grid, mean_line } = payload;
  const current = curves.current ?? curves.base;
  switch (highlight.mode) {
    case "base_vs_mean":
      return { reference: grid.map(() => mean_line), compared: curves.base.values };
    case "base_vs_current":
    case "current_vs_base":
      return { reference: curves.base.values, compared: current.values };
    case "previous_vs_current":
      return { reference: (curves.previous ?? curves.base).values, compared: current.values };
    case "truth_deviation":
      if (!curves.truth) throw new PayloadError("truth_deviation highlight without truth curve");
      return { reference: curves.truth.values, compared: current.values };
    case "interaction":
      if (!payload.decomposition) {
        throw new PayloadError("interaction highlight without decomposition");
      }
      return { reference: payload.decomposition.main_line, compared: current.values };
    default:
      throw new PayloadError(`unknown highlight mode ${highlight.mode}`);
  }
}

/** Split the band into runs of constant sign (above vs below the reference). */
export function signRuns(
  reference: SeriesPoint[],
  compared: SeriesPoint[],
): { from: number; to: number; above: boolean }[] {
  const runs: { from: number; to: number; above: boolean }[] = [];
  let start = -1;
  let above = false;
  for (let i = 0; i < reference.length; i++) {
    const r = reference[i];
    const c = compared[i];
    const defined = r !== null && c !== null;
    const nowAbove = defined && (c as number) >= (r as number);
    if (!defined) {
      if (start >= 0) runs.push({ from: start, to: i - 1, above });
      start = -1;
      continue;
    }
    if (start < 0) {
      start = i;
      above = nowAbove;
    } else if (nowAbove !== above) {
      runs.push({ from: start, to: i, above });
      start = i;
      above = nowAbove;
    }
  }
  if (start >= 0) runs.push({ from: start, to: reference.length - 1, above });
  return runs;
}
