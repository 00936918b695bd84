/** Coordinate math for the distorted pixel grid: prefix sums, picking
 *  under distortion, gap-band geometry, timeline ticks. */

export function prefixSums(widths: readonly number[]): number[] {
  const out = new Array(widths.length + 1);
  out[0] = 0;
  for (let i = 0; i < widths.length; i++) out[i + 1] = out[i] + widths[i];
  return out;
}

/** Column index under x, or null outside the plot. Distorted widths are
 *  honored via the prefix sums. */
export function columnAt(x: number, prefix: readonly number[]): number | null {
  if (x < prefix[0] || x >= prefix[prefix.length - 1]) return null;
  let lo = 0;
  let hi = prefix.length - 2;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (prefix[mid] <= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

export interface RowBand {
  kind: "row" | "gap";
  index: number; // row index, or the row the gap follows
  top: number;
  bottom: number;
}

/** Vertical layout of data rows and hatched gap bands.
 *  `gapAfterRow[i]` inserts a band below row i (the last flag is ignored). */
export function rowBands(
  gapAfterRow: readonly boolean[],
  rowHeight: number,
  bandHeight: number,
): RowBand[] {
  const bands: RowBand[] = [];
  let y = 0;
  const n = gapAfterRow.length;
  for (let i = 0; i < n; i++) {
    bands.push({ kind: "row", index: i, top: y, bottom: y + rowHeight });
    y += rowHeight;
    if (i < n - 1 && gapAfterRow[i]) {
      bands.push({ kind: "gap", index: i, top: y, bottom: y + bandHeight });
      y += bandHeight;
    }
  }
  return bands;
}

export function totalHeight(bands: readonly RowBand[]): number {
  return bands.length ? bands[bands.length - 1].bottom : 0;
}

/** Data row under y; gap bands carry no data and pick nothing. */
export function rowAt(y: number, bands: readonly RowBand[]): number | null {
  for (const band of bands) {
    if (y >= band.top && y < band.bottom) {
      return band.kind === "row" ? band.index : null;
    }
  }
  return null;
}

/** Rows intersecting [y0, y1]; bands between them select nothing but do not
 *  split the selection. */
export function rowsInSpan(
  y0: number,
  y1: number,
  bands: readonly RowBand[],
): [number, number] | null {
  const lo = Math.min(y0, y1);
  const hi = Math.max(y0, y1);
  let first: number | null = null;
  let last: number | null = null;
  for (const band of bands) {
    if (band.kind !== "row") continue;
    if (band.bottom <= lo || band.top >= hi) continue;
    if (first === null) first = band.index;
    last = band.index;
  }
  return first === null || last === null ? null : [first, last];
}

export function columnsInSpan(
  x0: number,
  x1: number,
  prefix: readonly number[],
): [number, number] | null {
  const lo = Math.min(x0, x1);
  const hi = Math.max(x0, x1);
  const t = prefix.length - 1;
  let first: number | null = null;
  let last: number | null = null;
  for (let c = 0; c < t; c++) {
    if (prefix[c + 1] <= lo || prefix[c] >= hi) continue;
    if (first === null) first = c;
    last = c;
  }
  return first === null || last === null ? null : [first, last];
}

/** Timeline tick heights, linearly proportional to the column widths. */
export function tickHeights(widths: readonly number[], maxHeight: number): number[] {
  const top = Math.max(...widths);
  return widths.map((w) => (w * maxHeight) / top);
}
