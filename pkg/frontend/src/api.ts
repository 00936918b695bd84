/** Thin typed client for the session endpoints. */

import type {
  GlyphDoc,
  LayoutDoc,
  ParamsResponse,
  PathDoc,
  QualityDoc,
  SessionInfo,
  Stat,
} from "./types.js";
import type { ParamsPatch } from "./state.js";

export class ApiClient {
  constructor(private readonly base: string,
              private readonly fetchFn: typeof fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const text = await response.text();
      throw new Error(`${method} ${path} -> ${response.status}: ${text}`);
    }
    return (await response.json()) as T;
  }

  createSession(geojson: string, csv: string, rule: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { geojson, csv, rule });
  }

  setParams(sessionId: string, patch: ParamsPatch): Promise<ParamsResponse> {
    return this.request("PATCH", `/sessions/${sessionId}/params`, patch);
  }

  getLayout(sessionId: string, revision: number): Promise<SessionInfo & { layout: LayoutDoc; warning?: string }> {
    return this.request("GET", `/sessions/${sessionId}/layout?revision=${revision}`);
  }

  getQuality(sessionId: string, revision: number): Promise<SessionInfo & { quality: QualityDoc }> {
    return this.request("GET", `/sessions/${sessionId}/quality?revision=${revision}`);
  }

  getPath(sessionId: string, revision: number): Promise<SessionInfo & { path: PathDoc }> {
    return this.request("GET", `/sessions/${sessionId}/path?revision=${revision}`);
  }

  postSelection(
    sessionId: string,
    rowRange: [number, number],
    timeRange: [number, number],
    stat: Stat,
  ): Promise<SessionInfo & { glyph: GlyphDoc }> {
    return this.request("POST", `/sessions/${sessionId}/selection`, {
      row_range: rowRange,
      time_range: timeRange,
      stat,
    });
  }
}
