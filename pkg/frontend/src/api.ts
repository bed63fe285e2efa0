/** Typed client for the prediction service; latest-wins sequencing. */

import { DrawingPoint } from "./geometry.js";

export interface ModelInfo {
  n_topics: number;
  private_topics: number[];
  view_names: string[];
  vocab_sizes: number[];
  seed: number | null;
}

export interface RankedLabel {
  label: string;
  score: number;
}

export interface ViewResult {
  name: string;
  n: number;
  labels: RankedLabel[];
}

export interface PredictResponse {
  regions: number;
  views: ViewResult[];
  model: ModelInfo;
}

export type PredictOutcome =
  | { kind: "ok"; response: PredictResponse }
  | { kind: "stale" }
  | { kind: "error"; message: string };

/** Minimal fetch surface so tests can inject a fake. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

async function errorMessage(res: { status: number; json(): Promise<unknown> }): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* not JSON; fall through */
  }
  return `request failed with status ${res.status}`;
}

export class ApiClient {
  private seq = 0;

  constructor(
    private readonly fetchFn: FetchLike,
    private readonly base: string = "",
  ) {}

  async fetchModel(): Promise<ModelInfo> {
    const res = await this.fetchFn(`${this.base}/api/model`);
    if (!res.ok) throw new Error(await errorMessage(res));
    return (await res.json()) as ModelInfo;
  }

  /**
   * POST the drawing; if another predict started while this one was in
   * flight, the response is reported stale and must be discarded.
   * Errors on stale requests are also swallowed: only the newest
   * request may talk to the user.
   */
  async predict(points: readonly DrawingPoint[]): Promise<PredictOutcome> {
    const ticket = ++this.seq;
    let res;
    try {
      res = await this.fetchFn(`${this.base}/api/predict`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ points }),
      });
    } catch (err) {
      if (ticket !== this.seq) return { kind: "stale" };
      return { kind: "error", message: err instanceof Error ? err.message : String(err) };
    }
    if (ticket !== this.seq) return { kind: "stale" };
    if (!res.ok) return { kind: "error", message: await errorMessage(res) };
    return { kind: "ok", response: (await res.json()) as PredictResponse };
  }
}
