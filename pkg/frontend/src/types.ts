/** JSON shapes served by the session endpoints. */

export interface SessionInfo {
  session_id: string;
  revision: number;
  ordering_revision: number;
  alpha: number;
  beta: number;
  extent: [number, number] | null;
  rule: string;
  n_regions: number;
  n_steps: number;
}

export interface LayoutDoc {
  row_order: string[];
  gaps: boolean[]; // one flag per row; true = hatched band after that row
  widths: number[];
  color_domain: [number, number];
  cells: number[][];
  timestamps: string[];
  colors?: string[][];
}

export interface QualityDoc {
  beta: number;
  gaps: boolean[]; // one flag per consecutive ordering pair
  hops: number[];
  borders: { u: string; v: string; w: number }[];
  moran: { raw: number[]; normalized: number[] };
}

export interface OrderingDoc {
  sequence: string[];
  provenance: Record<string, unknown>;
}

export interface GlyphDoc {
  ids: string[];
  values: Record<string, number>;
  color_domain: [number, number];
  stat: string;
  strokes: { u: string; v: string; width: number }[];
}

export interface PathDoc {
  ids: string[];
  points: [number, number][];
  hatched: boolean[];
  positions: Record<string, number>;
}

export interface ParamsResponse extends SessionInfo {
  ordering: OrderingDoc;
  quality: QualityDoc;
  elapsed_ms: number;
}

export interface Brush {
  rowRange: [number, number];
  timeRange: [number, number];
}

export type Stat = "min" | "mean" | "max";

export interface Toggles {
  gaps: boolean;
  distortion: boolean;
  halos: boolean;
  path: boolean;
}
