/** DOM bootstrap: session form, canvases, parameter controls, brushing.
 *
 *  All drawing and coordinate math lives in the tested modules; this file
 *  only wires events to them and keeps the per-revision document cache.
 */

import { ApiClient } from "./api.js";
import { RegionGeometry, drawGlyph, parseRegionGeometry, placeGlyph } from "./glyph.js";
import {
  Ctx2D,
  GAP_BAND_HEIGHT,
  ROW_HEIGHT,
  TICK_MAX_HEIGHT,
  drawDensePixels,
  drawTimeline,
  PixelGeometry,
} from "./pixels.js";
import { columnsInSpan, rowsInSpan } from "./scales.js";
import { PatchQueue, ViewState, applyAck, debounce, initialState } from "./state.js";
import type { GlyphDoc, LayoutDoc, ParamsResponse, PathDoc, Stat } from "./types.js";

interface Docs {
  revision: number;
  layout: LayoutDoc;
  path: PathDoc | null;
}

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function ctx(canvas: HTMLCanvasElement): Ctx2D & CanvasRenderingContext2D {
  return canvas.getContext("2d") as Ctx2D & CanvasRenderingContext2D;
}

class App {
  private api!: ApiClient;
  private state: ViewState | null = null;
  private docs: Docs | null = null;
  private glyph: GlyphDoc | null = null;
  private geometry: RegionGeometry | null = null;
  private queue: PatchQueue<ParamsResponse> | null = null;
  private pixelGeom: PixelGeometry | null = null;
  private drag: { x0: number; y0: number } | null = null;
  private extentDrag: { x0: number } | null = null;

  start(): void {
    $("create").addEventListener("click", () => void this.createSession());
    const alpha = $<HTMLInputElement>("alpha");
    const pushAlpha = debounce(() => {
      this.setStatus("recomputing ordering…");
      this.queue?.push({ alpha: Number(alpha.value) });
    }, 300);
    alpha.addEventListener("input", () => {
      $("alpha-value").textContent = Number(alpha.value).toFixed(2);
      pushAlpha();
    });
    $<HTMLInputElement>("beta").addEventListener("change", (event) => {
      const beta = Math.max(1, Math.round(Number((event.target as HTMLInputElement).value)));
      (event.target as HTMLInputElement).value = String(beta);
      this.queue?.push({ beta });
    });
    $<HTMLSelectElement>("stat").addEventListener("change", () => void this.reselect());
    for (const name of ["gaps", "distortion", "halos", "path"] as const) {
      $<HTMLInputElement>(`toggle-${name}`).addEventListener("change", (event) => {
        if (!this.state) return;
        this.state.toggles[name] = (event.target as HTMLInputElement).checked;
        if (name === "path" && this.state.toggles.path && !this.docs?.path) {
          void this.refresh({ rows: false, gaps: true, timeline: false });
          return;
        }
        this.draw();
      });
    }
    this.wireBrush();
    this.wireExtent();
  }

  private setStatus(text: string): void {
    $("status").textContent = text;
  }

  private async createSession(): Promise<void> {
    const geojson = $<HTMLTextAreaElement>("geojson").value;
    const csv = $<HTMLTextAreaElement>("csv").value;
    const rule = $<HTMLSelectElement>("rule").value;
    this.api = new ApiClient($<HTMLInputElement>("api-base").value.replace(/\/$/, ""));
    this.setStatus("ingesting…");
    try {
      const info = await this.api.createSession(geojson, csv, rule);
      this.geometry = parseRegionGeometry(geojson);
      this.state = initialState(info);
      this.glyph = null;
      $<HTMLInputElement>("alpha").value = String(info.alpha);
      $("alpha-value").textContent = info.alpha.toFixed(2);
      $<HTMLInputElement>("beta").value = String(info.beta);
      this.queue = new PatchQueue(
        (patch) => this.api.setParams(this.state!.sessionId, patch),
        (ack) => {
          const plan = this.state ? applyAck(this.state, ack) : null;
          if (plan && (plan.rows || plan.gaps)) void this.refresh(plan);
          else this.setStatus("ready");
        },
        (error) => this.setStatus(String(error)),
      );
      await this.refresh({ rows: true, gaps: true, timeline: true });
    } catch (error) {
      this.setStatus(String(error));
    }
  }

  /** Fetch the documents for the current revision and swap them atomically,
   *  so one frame never mixes revisions. */
  private async refresh(plan: { rows: boolean; gaps: boolean; timeline: boolean }): Promise<void> {
    if (!this.state) return;
    for (let attempt = 0; attempt < 3; attempt++) {
      const revision = this.state.revision;
      const layoutDoc = await this.api.getLayout(this.state.sessionId, revision);
      const pathDoc = this.state.toggles.path
        ? await this.api.getPath(this.state.sessionId, revision)
        : null;
      if (layoutDoc.revision !== this.state.revision) continue; // raced a change
      if (pathDoc && pathDoc.revision !== layoutDoc.revision) continue;
      this.docs = {
        revision: layoutDoc.revision,
        layout: layoutDoc.layout,
        path: pathDoc ? pathDoc.path : null,
      };
      if (plan.rows) {
        // the brushed row indices referred to the previous ordering
        this.glyph = null;
        this.state.brush = null;
      }
      this.draw();
      this.setStatus(`ready (revision ${this.docs.revision})`);
      return;
    }
    this.setStatus("could not settle on a revision; retry");
  }

  private draw(): void {
    if (!this.state || !this.docs) return;
    const layout = this.docs.layout;
    const pixels = $<HTMLCanvasElement>("pixels");
    const n = layout.row_order.length;
    const bandCount = layout.gaps.slice(0, -1).filter((g) => g).length;
    pixels.width = Math.ceil(layout.widths.reduce((a, b) => a + b, 0));
    pixels.height = n * ROW_HEIGHT + (this.state.toggles.gaps ? bandCount * GAP_BAND_HEIGHT : 0);
    this.pixelGeom = drawDensePixels(ctx(pixels), layout, this.state.toggles, this.state.brush);

    const timeline = $<HTMLCanvasElement>("timeline");
    timeline.width = pixels.width;
    timeline.height = TICK_MAX_HEIGHT + 4;
    drawTimeline(ctx(timeline), layout, this.state.toggles, this.state.extent);

    const overlay = $<HTMLCanvasElement>("overlay");
    overlay.width = pixels.width + 220;
    overlay.height = Math.max(pixels.height, 220);
    const octx = ctx(overlay);
    octx.clearRect(0, 0, overlay.width, overlay.height);
    if (this.state.brush && this.glyph && this.geometry) {
      const rows = this.state.brush.rowRange;
      const top = this.pixelGeom.bands.find(
        (b) => b.kind === "row" && b.index === rows[0])?.top ?? 0;
      const bottom = this.pixelGeom.bands.find(
        (b) => b.kind === "row" && b.index === rows[1])?.bottom ?? ROW_HEIGHT;
      const place = placeGlyph(top, bottom, this.pixelGeom.plotWidth,
                               { width: overlay.width, height: overlay.height });
      drawGlyph(octx, this.glyph, this.geometry, place, {
        halos: this.state.toggles.halos,
        path: this.state.toggles.path ? this.docs.path : null,
      });
    }
  }

  private wireBrush(): void {
    const overlay = $<HTMLCanvasElement>("overlay");
    overlay.addEventListener("mousedown", (event) => {
      this.drag = { x0: event.offsetX, y0: event.offsetY };
    });
    overlay.addEventListener("mousemove", (event) => {
      if (!this.drag || !this.pixelGeom) return;
      // rubber band lives on the overlay; the pixel canvas stays untouched
      const octx = ctx(overlay);
      octx.clearRect(0, 0, overlay.width, overlay.height);
      octx.strokeStyle = "#d62728";
      octx.lineWidth = 1;
      octx.setLineDash([3, 2]);
      octx.strokeRect(
        Math.min(this.drag.x0, event.offsetX),
        Math.min(this.drag.y0, event.offsetY),
        Math.abs(event.offsetX - this.drag.x0),
        Math.abs(event.offsetY - this.drag.y0),
      );
      octx.setLineDash([]);
    });
    overlay.addEventListener("mouseup", (event) => {
      if (!this.drag || !this.pixelGeom || !this.state) return;
      const { x0, y0 } = this.drag;
      this.drag = null;
      const rows = rowsInSpan(y0, event.offsetY, this.pixelGeom.bands);
      const cols = columnsInSpan(x0, event.offsetX, this.pixelGeom.prefix);
      if (!rows || !cols) {
        this.state.brush = null;
        this.glyph = null;
        this.draw();
        return; // degenerate drags are ignored
      }
      this.state.brush = { rowRange: rows, timeRange: cols };
      void this.reselect();
    });
  }

  private async reselect(): Promise<void> {
    if (!this.state || !this.state.brush) return;
    this.state.stat = $<HTMLSelectElement>("stat").value as Stat;
    const doc = await this.api.postSelection(
      this.state.sessionId,
      this.state.brush.rowRange,
      this.state.brush.timeRange,
      this.state.stat,
    );
    if (doc.revision !== this.state.revision) return; // stale: discard
    this.glyph = doc.glyph;
    this.draw();
  }

  private wireExtent(): void {
    const timeline = $<HTMLCanvasElement>("timeline");
    timeline.addEventListener("mousedown", (event) => {
      this.extentDrag = { x0: event.offsetX };
    });
    timeline.addEventListener("mouseup", (event) => {
      if (!this.extentDrag || !this.pixelGeom || !this.state) return;
      const span = columnsInSpan(this.extentDrag.x0, event.offsetX, this.pixelGeom.prefix);
      this.extentDrag = null;
      if (!span || span[0] === span[1]) return;
      this.setStatus("recomputing ordering…");
      this.queue?.push({ extent: span });
    });
    timeline.addEventListener("dblclick", () => {
      this.setStatus("recomputing ordering…");
      this.queue?.push({ extent: null });
    });
  }
}

new App().start();
