/** View state, revision gating, and the single-in-flight parameter queue.
 *
 *  Invariants kept here:
 *  - a frame only ever renders data from one acknowledged revision;
 *  - out-of-order responses are discarded;
 *  - at most one state-changing request is in flight per session, with the
 *    latest pending parameters coalesced behind it;
 *  - a beta-only acknowledgement (ordering_revision unchanged) re-renders
 *    gaps without re-laying-out rows.
 */

import type { Brush, SessionInfo, Stat, Toggles } from "./types.js";

export interface ViewState {
  sessionId: string;
  revision: number;
  orderingRevision: number;
  alpha: number;
  beta: number;
  extent: [number, number] | null;
  stat: Stat;
  brush: Brush | null;
  toggles: Toggles;
}

export function initialState(info: SessionInfo): ViewState {
  return {
    sessionId: info.session_id,
    revision: info.revision,
    orderingRevision: info.ordering_revision,
    alpha: info.alpha,
    beta: info.beta,
    extent: info.extent,
    stat: "mean",
    brush: null,
    toggles: { gaps: true, distortion: true, halos: true, path: false },
  };
}

export interface RenderPlan {
  rows: boolean; // row order or cell data changed: full re-layout
  gaps: boolean; // only the gap mask changed: redraw bands in place
  timeline: boolean;
}

/** Applies server acknowledgements in revision order; stale ones are dropped.
 *  Returns the views that must re-render, or null when discarded. */
export function applyAck(state: ViewState, info: SessionInfo): RenderPlan | null {
  if (info.revision < state.revision) return null; // out-of-order: discard
  const reordered = info.ordering_revision !== state.orderingRevision;
  const unchanged = info.revision === state.revision;
  state.revision = info.revision;
  state.orderingRevision = info.ordering_revision;
  state.alpha = info.alpha;
  state.beta = info.beta;
  state.extent = info.extent;
  if (unchanged) return { rows: false, gaps: false, timeline: false };
  return reordered
    ? { rows: true, gaps: true, timeline: false } // widths depend only on data
    : { rows: false, gaps: true, timeline: false };
}

export interface ParamsPatch {
  alpha?: number;
  beta?: number;
  extent?: [number, number] | null;
}

/** Serializes state-changing requests: one in flight, latest patch queued. */
export class PatchQueue<R> {
  private inFlight = false;
  private pending: ParamsPatch | null = null;

  constructor(private readonly send: (patch: ParamsPatch) => Promise<R>,
              private readonly onAck: (response: R) => void,
              private readonly onError: (error: unknown) => void = () => {}) {}

  get busy(): boolean {
    return this.inFlight;
  }

  push(patch: ParamsPatch): void {
    this.pending = { ...this.pending, ...patch };
    void this.drain();
  }

  private async drain(): Promise<void> {
    if (this.inFlight || this.pending === null) return;
    const patch = this.pending;
    this.pending = null;
    this.inFlight = true;
    try {
      const response = await this.send(patch);
      this.onAck(response);
    } catch (error) {
      this.onError(error);
    } finally {
      this.inFlight = false;
      void this.drain();
    }
  }
}

/** Trailing-edge debounce; used on the alpha slider (recomputes are costly). */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, waitMs);
  };
}
