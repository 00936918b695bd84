/** Value-to-color mapping on the shared global domain, plus the lightening
 *  used to de-emphasize pixels outside a brushed selection. */

import { VIRIDIS_HEX } from "./viridisTable.js";

function hexToRgb(hex: string): [number, number, number] {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

function rgbToHex([r, g, b]: [number, number, number]): string {
  const c = (v: number) => Math.round(v).toString(16).padStart(2, "0");
  return `#${c(r)}${c(g)}${c(b)}`;
}

/** Same lookup semantics as the engine: control point i at t = i/256,
 *  clamped at the ends, linear interpolation between points. */
export function viridis(t: number): string {
  const clamped = t < 0 ? 0 : t > 1 ? 1 : t;
  const pos = clamped * 256;
  const i = Math.floor(pos);
  if (i >= 255) return VIRIDIS_HEX[255];
  const frac = pos - i;
  if (frac === 0) return VIRIDIS_HEX[i];
  const a = hexToRgb(VIRIDIS_HEX[i]);
  const b = hexToRgb(VIRIDIS_HEX[i + 1]);
  return rgbToHex([
    a[0] + (b[0] - a[0]) * frac,
    a[1] + (b[1] - a[1]) * frac,
    a[2] + (b[2] - a[2]) * frac,
  ]);
}

export function valueToColor(value: number, domain: [number, number]): string {
  const [lo, hi] = domain;
  return viridis(hi <= lo ? 0.5 : (value - lo) / (hi - lo));
}

/** Increase lightness by mixing toward white; amount in [0, 1]. */
export function lighten(hex: string, amount: number): string {
  const rgb = hexToRgb(hex);
  return rgbToHex([
    rgb[0] + (255 - rgb[0]) * amount,
    rgb[1] + (255 - rgb[1]) * amount,
    rgb[2] + (255 - rgb[2]) * amount,
  ]);
}

/** Relative luminance in [0, 255], for tests and contrast decisions. */
export function luminance(hex: string): number {
  const [r, g, b] = hexToRgb(hex);
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}
