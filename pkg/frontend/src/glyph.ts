/** Map glyph overlay: the brushed selection as a small choropleth placed
 *  next to the brushed rows, with halo strokes and the optional ordering
 *  path. Polygon geometry comes from the GeoJSON the user ingested; the
 *  glyph keeps the full geographic extent but draws only selected regions.
 */

import { valueToColor, viridis } from "./colors.js";
import type { Ctx2D } from "./pixels.js";
import type { GlyphDoc, PathDoc } from "./types.js";

export type Rings = [number, number][][]; // rings of [x, y], per region

export interface RegionGeometry {
  ids: string[];
  rings: Map<string, Rings>;
  bounds: [number, number, number, number]; // minx, miny, maxx, maxy
}

export function parseRegionGeometry(geojson: string | object, idProperty = "id"): RegionGeometry {
  const doc = typeof geojson === "string" ? JSON.parse(geojson) : (geojson as any);
  const ids: string[] = [];
  const rings = new Map<string, Rings>();
  let minx = Infinity, miny = Infinity, maxx = -Infinity, maxy = -Infinity;
  for (const feature of doc.features ?? []) {
    const id = String(feature.properties?.[idProperty]);
    const geom = feature.geometry ?? {};
    const parts: number[][][][] =
      geom.type === "Polygon" ? [geom.coordinates] :
      geom.type === "MultiPolygon" ? geom.coordinates : [];
    const collected: Rings = [];
    for (const part of parts) {
      for (const ring of part) {
        const points = ring.map((pt: number[]) => [pt[0], pt[1]] as [number, number]);
        for (const [x, y] of points) {
          minx = Math.min(minx, x); maxx = Math.max(maxx, x);
          miny = Math.min(miny, y); maxy = Math.max(maxy, y);
        }
        collected.push(points);
      }
    }
    ids.push(id);
    rings.set(id, collected);
  }
  return { ids, rings, bounds: [minx, miny, maxx, maxy] };
}

export interface GlyphPlacement {
  x: number;
  y: number;
  size: number;
}

/** Place the glyph to the right of the brushed rows, clamped to the
 *  viewport. */
export function placeGlyph(
  brushTop: number,
  brushBottom: number,
  plotRight: number,
  viewport: { width: number; height: number },
  size = 180,
  margin = 12,
): GlyphPlacement {
  const x = Math.min(plotRight + margin, viewport.width - size - margin);
  const middle = (brushTop + brushBottom) / 2 - size / 2;
  const y = Math.max(margin, Math.min(middle, viewport.height - size - margin));
  return { x: Math.max(margin, x), y, size };
}

export function projector(
  bounds: [number, number, number, number],
  place: GlyphPlacement,
): (pt: [number, number]) => [number, number] {
  const [minx, miny, maxx, maxy] = bounds;
  const span = Math.max(maxx - minx, maxy - miny) || 1;
  const scale = place.size / span;
  return ([x, y]) => [place.x + (x - minx) * scale, place.y + (maxy - y) * scale];
}

function tracePath(ctx: Ctx2D, ring: [number, number][], project: (pt: [number, number]) => [number, number]): void {
  ring.forEach((pt, k) => {
    const [x, y] = project(pt);
    if (k === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
}

export interface GlyphRenderOptions {
  halos: boolean;
  path: PathDoc | null;
}

export function drawGlyph(
  ctx: Ctx2D & { fill(): void; closePath(): void },
  glyph: GlyphDoc,
  geometry: RegionGeometry,
  place: GlyphPlacement,
  options: GlyphRenderOptions,
): void {
  const project = projector(geometry.bounds, place);
  ctx.fillStyle = "#fcfcfc";
  ctx.fillRect(place.x - 2, place.y - 2, place.size + 4, place.size + 4);

  for (const id of glyph.ids) {
    const rings = geometry.rings.get(id);
    if (!rings) continue;
    ctx.fillStyle = valueToColor(glyph.values[id], glyph.color_domain);
    for (const ring of rings) {
      ctx.beginPath();
      tracePath(ctx, ring, project);
      ctx.closePath();
      ctx.fill();
    }
  }

  if (options.halos) {
    const selected = new Set(glyph.ids);
    ctx.strokeStyle = "#1a1a1a";
    ctx.setLineDash([]);
    for (const { u, v, width } of glyph.strokes) {
      if (!selected.has(u) || !selected.has(v)) continue;
      for (const segment of sharedSegments(geometry.rings.get(u), geometry.rings.get(v))) {
        ctx.lineWidth = width;
        ctx.beginPath();
        tracePath(ctx, segment, project);
        ctx.stroke();
      }
    }
  }

  if (options.path) {
    drawOrderingPath(ctx, options.path, project);
  }
}

/** Ordering path through the centroids; links at trust gaps are dashed to
 *  match the hatched bands in the pixel view. */
export function drawOrderingPath(
  ctx: Ctx2D,
  path: PathDoc,
  project: (pt: [number, number]) => [number, number],
): void {
  for (let k = 0; k < path.hatched.length; k++) {
    const [x1, y1] = project(path.points[k]);
    const [x2, y2] = project(path.points[k + 1]);
    ctx.strokeStyle = viridis(path.positions[path.ids[k]]);
    ctx.lineWidth = 1.4;
    ctx.setLineDash(path.hatched[k] ? [4, 3] : []);
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

const KEY_PRECISION = 1e9;

function segmentKey(a: [number, number], b: [number, number]): string {
  const ka = `${Math.round(a[0] * KEY_PRECISION)},${Math.round(a[1] * KEY_PRECISION)}`;
  const kb = `${Math.round(b[0] * KEY_PRECISION)},${Math.round(b[1] * KEY_PRECISION)}`;
  return ka < kb ? `${ka}|${kb}` : `${kb}|${ka}`;
}

/** Boundary segments two regions have in common (matching vertex pairs). */
export function sharedSegments(
  ringsA: Rings | undefined,
  ringsB: Rings | undefined,
): [number, number][][] {
  if (!ringsA || !ringsB) return [];
  const keys = new Set<string>();
  for (const ring of ringsA) {
    for (let k = 0; k < ring.length; k++) {
      keys.add(segmentKey(ring[k], ring[(k + 1) % ring.length]));
    }
  }
  const shared: [number, number][][] = [];
  for (const ring of ringsB) {
    for (let k = 0; k < ring.length; k++) {
      const a = ring[k];
      const b = ring[(k + 1) % ring.length];
      if (keys.has(segmentKey(a, b))) shared.push([a, b]);
    }
  }
  return shared;
}

/** min/mean/max of a brushed window, used to cross-check displayed values. */
export function windowAggregate(
  cells: number[][],
  rowRange: [number, number],
  timeRange: [number, number],
  stat: "min" | "mean" | "max",
): Map<number, number> {
  const out = new Map<number, number>();
  for (let r = rowRange[0]; r <= rowRange[1]; r++) {
    const slice = cells[r].slice(timeRange[0], timeRange[1] + 1);
    let value: number;
    if (stat === "min") value = Math.min(...slice);
    else if (stat === "max") value = Math.max(...slice);
    else value = slice.reduce((a, b) => a + b, 0) / slice.length;
    out.set(r, value);
  }
  return out;
}
