/** Pure screen-space helpers: projection and formatting only, no domain math. */

export interface Box {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

export function bounds(points: number[][], pad = 0.5): Box {
  if (points.length === 0) {
    return { minX: -pad, maxX: pad, minY: -pad, maxY: pad };
  }
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [x, y] of points as [number, number][]) {
    if (x < minX) minX = x;
    if (x > maxX) maxX = x;
    if (y < minY) minY = y;
    if (y > maxY) maxY = y;
  }
  return { minX: minX - pad, maxX: maxX + pad, minY: minY - pad, maxY: maxY + pad };
}

export class Mapper {
  constructor(
    readonly box: Box,
    readonly width = 360,
    readonly height = 300,
  ) {}

  /* y axis flips: screen y grows downward */
  project(p: number[]): [number, number] {
    const sx = (p[0] - this.box.minX) / (this.box.maxX - this.box.minX);
    const sy = (p[1] - this.box.minY) / (this.box.maxY - this.box.minY);
    return [sx * this.width, (1 - sy) * this.height];
  }
}

export function polygonPoints(mapper: Mapper, points: number[][]): string {
  return points
    .map((p) => {
      const [x, y] = mapper.project(p);
      return `${round1(x)},${round1(y)}`;
    })
    .join(" ");
}

function round1(v: number): number {
  return Math.round(v * 10) / 10;
}

/** Format one number for display; nulls render as n/a. */
export function fmt(v: number | null | undefined, digits = 3): string {
  if (v === null || v === undefined || Number.isNaN(v)) return "n/a";
  const text = v.toFixed(digits);
  /* values that round to zero must not keep their sign */
  return Number(text) === 0 ? (0).toFixed(digits) : text;
}

export function fmtPoint(p: number[] | null | undefined, digits = 3): string {
  if (!p) return "n/a";
  return `(${p.map((v) => fmt(v, digits)).join(", ")})`;
}

/** Integer-looking values drop their decimals; plan tables read better that way. */
export function fmtCell(v: number): string {
  return Number.isInteger(v) ? String(v) : fmt(v, 2);
}

/** Polyline points attribute for a delta series; null entries break the line. */
export function sparkline(
  series: (number | null)[],
  width: number,
  height: number,
  pad = 2,
): string {
  const values = series.filter((v): v is number => v !== null && !Number.isNaN(v));
  if (values.length === 0) return "";
  const top = Math.max(...values, 1e-12);
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const stepX = series.length > 1 ? innerW / (series.length - 1) : 0;
  const parts: string[] = [];
  series.forEach((v, i) => {
    if (v === null || Number.isNaN(v)) return;
    const x = pad + i * stepX;
    const y = pad + (1 - v / top) * innerH;
    parts.push(`${round1(x)},${round1(y)}`);
  });
  return parts.join(" ");
}

/** Compass arrow endpoint for a unit direction, centered in a square viewport. */
export function arrowEnd(e: number[], cx: number, cy: number, r: number): [number, number] {
  return [cx + e[0] * r, cy - e[1] * r];
}
