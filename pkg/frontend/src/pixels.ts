/** Canvas rendering of the dense pixel view and the distorted timeline.
 *
 *  Drawing goes through a minimal 2D-context interface so the logic is
 *  testable without a DOM; the real CanvasRenderingContext2D satisfies it.
 */

import { lighten, valueToColor } from "./colors.js";
import {
  RowBand,
  prefixSums,
  rowBands,
  tickHeights,
  totalHeight,
} from "./scales.js";
import type { Brush, LayoutDoc, Toggles } from "./types.js";

export interface Ctx2D {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  setLineDash(segments: number[]): void;
}

export interface PixelGeometry {
  prefix: number[];
  bands: RowBand[];
  plotHeight: number;
  plotWidth: number;
}

export const ROW_HEIGHT = 8;
export const GAP_BAND_HEIGHT = 12; // 1.5 pixel rows
export const TICK_MAX_HEIGHT = 24;
export const LIGHTEN_AMOUNT = 0.6;

export function effectiveWidths(layout: LayoutDoc, distortion: boolean): number[] {
  if (distortion) return layout.widths;
  const total = layout.widths.reduce((a, b) => a + b, 0);
  return layout.widths.map(() => total / layout.widths.length);
}

/** Paint every cell; lighten the ones outside the brush; hatch the gap
 *  bands. Returns the geometry used for picking. */
export function drawDensePixels(
  ctx: Ctx2D,
  layout: LayoutDoc,
  toggles: Toggles,
  brush: Brush | null,
): PixelGeometry {
  const widths = effectiveWidths(layout, toggles.distortion);
  const prefix = prefixSums(widths);
  const gapFlags = toggles.gaps ? layout.gaps : layout.gaps.map(() => false);
  const bands = rowBands(gapFlags, ROW_HEIGHT, GAP_BAND_HEIGHT);
  const plotWidth = prefix[prefix.length - 1];
  const plotHeight = totalHeight(bands);
  ctx.clearRect(0, 0, plotWidth, plotHeight);

  for (const band of bands) {
    if (band.kind === "gap") {
      drawHatchBand(ctx, band, plotWidth);
      continue;
    }
    const row = band.index;
    const cells = layout.cells[row];
    for (let col = 0; col < cells.length; col++) {
      let fill = valueToColor(cells[col], layout.color_domain);
      if (brush && !insideBrush(brush, row, col)) {
        fill = lighten(fill, LIGHTEN_AMOUNT);
      }
      ctx.fillStyle = fill;
      ctx.fillRect(prefix[col], band.top, widths[col], ROW_HEIGHT);
    }
  }
  return { prefix, bands, plotHeight, plotWidth };
}

export function insideBrush(brush: Brush, row: number, col: number): boolean {
  const [r0, r1] = brush.rowRange;
  const [c0, c1] = brush.timeRange;
  return row >= r0 && row <= r1 && col >= c0 && col <= c1;
}

function drawHatchBand(ctx: Ctx2D, band: RowBand, width: number): void {
  ctx.fillStyle = "#f4f4f4";
  ctx.fillRect(0, band.top, width, band.bottom - band.top);
  ctx.strokeStyle = "#888888";
  ctx.lineWidth = 1.5;
  ctx.setLineDash([]);
  const h = band.bottom - band.top;
  ctx.beginPath();
  // 45-degree hatching, consistent with the ordering-path style
  for (let x = -h; x < width; x += 6) {
    ctx.moveTo(x, band.bottom);
    ctx.lineTo(x + h, band.top);
  }
  ctx.stroke();
}

/** Bar-chart style timeline whose heights and spacing mirror the widths. */
export function drawTimeline(
  ctx: Ctx2D,
  layout: LayoutDoc,
  toggles: Toggles,
  extent: [number, number] | null,
  height = TICK_MAX_HEIGHT,
): number[] {
  const widths = effectiveWidths(layout, toggles.distortion);
  const prefix = prefixSums(widths);
  const ticks = tickHeights(widths, height);
  const plotWidth = prefix[prefix.length - 1];
  ctx.clearRect(0, 0, plotWidth, height + 4);
  ctx.strokeStyle = "#444444";
  ctx.lineWidth = 1;
  ctx.setLineDash([]);
  ctx.beginPath();
  ctx.moveTo(0, 0.5);
  ctx.lineTo(plotWidth, 0.5);
  ctx.stroke();
  for (let col = 0; col < widths.length; col++) {
    const inExtent =
      extent === null || (col >= extent[0] && col <= extent[1]);
    ctx.fillStyle = inExtent ? "#777777" : "#cccccc";
    const barWidth = Math.max(widths[col] - 1, 0.5);
    ctx.fillRect(prefix[col] + (widths[col] - barWidth) / 2, 1, barWidth, ticks[col]);
  }
  return ticks;
}
