/** Pixel mapping: the only arithmetic the client performs on payload data. */

export class LinearScale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {
    if (d1 === d0) {
      // Degenerate domain (constant curve): pin to the range midpoint.
      this.d1 = d0 + 1;
      this.r0 = (r0 + r1) / 2;
      this.r1 = this.r0;
    }
  }

  map(v: number): number {
    return this.r0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  ticks(count: number): number[] {
    const out: number[] = [];
    for (let i = 0; i < count; i++) {
      out.push(this.d0 + ((this.d1 - this.d0) * i) / (count - 1));
    }
    return out;
  }
}

/** Categorical grids map to evenly spaced slots; continuous grids to value space. */
export function xPositions(grid: number[], kind: string, x0: number, x1: number): number[] {
  if (kind === "categorical") {
    const step = (x1 - x0) / Math.max(grid.length, 1);
    return grid.map((_, i) => x0 + step * (i + 0.5));
  }
  const scale = new LinearScale(grid[0], grid[grid.length - 1], x0, x1);
  return grid.map((v) => scale.map(v));
}

/** Where the instance sits on the x axis (clamped into the plot). */
export function instanceX(
  grid: number[],
  kind: string,
  positions: number[],
  value: number,
): number {
  if (kind === "categorical") {
    let best = 0;
    for (let i = 1; i < grid.length; i++) {
      if (Math.abs(grid[i] - value) < Math.abs(grid[best] - value)) best = i;
    }
    return positions[best];
  }
  const lo = grid[0];
  const hi = grid[grid.length - 1];
  const clamped = Math.min(Math.max(value, lo), hi);
  const scale = new LinearScale(lo, hi, positions[0], positions[positions.length - 1]);
  return scale.map(clamped);
}

export function formatTick(v: number): string {
  const abs = Math.abs(v);
  if (abs >= 1000) return v.toFixed(0);
  if (abs >= 10) return v.toFixed(1);
  return v.toFixed(2);
}
