/** Small helpers for building SVG DOM without a framework. */

const SVG_NS = "http://www.w3.org/2000/svg";

export function el<K extends string>(
  tag: K,
  attrs: Record<string, string | number> = {},
  cls?: string,
): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  if (cls) node.setAttribute("class", cls);
  return node;
}

export function text(content: string, attrs: Record<string, string | number>, cls?: string): SVGElement {
  const node = el("text", attrs, cls);
  node.textContent = content;
  return node;
}

/** Polyline path over (x, y) pairs, breaking at null y values. */
export function seriesPath(xs: number[], ys: (number | null)[]): string {
  let d = "";
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    const y = ys[i];
    if (y === null || Number.isNaN(y)) {
      pen = false;
      continue;
    }
    d += `${pen ? "L" : "M"}${round(xs[i])},${round(y)}`;
    pen = true;
  }
  return d;
}

/** Closed band between two series (for highlight areas and uncertainty). */
export function bandPath(
  xs: number[],
  upper: (number | null)[],
  lower: (number | null)[],
  from = 0,
  to = xs.length - 1,
): string {
  const up: string[] = [];
  const down: string[] = [];
  for (let i = from; i <= to; i++) {
    const u = upper[i];
    const l = lower[i];
    if (u === null || l === null || Number.isNaN(u) || Number.isNaN(l)) continue;
    up.push(`${round(xs[i])},${round(u)}`);
    down.unshift(`${round(xs[i])},${round(l)}`);
  }
  if (!up.length) return "";
  return `M${up.join("L")}L${down.join("L")}Z`;
}

function round(v: number): number {
  return Math.round(v * 100) / 100;
}
