/** Typed client for the session service's JSON endpoints. */

export type Choice = "l" | "k";

export interface PendingQuery {
  l: number;
  k: number;
  attributes_l: number[];
  attributes_k: number[];
}

export interface TraceRow {
  iteration: number;
  vertices: number;
  pool: number;
  disparity_pairs: number;
  mmr_bound: number;
  cumulative_time_s: number;
}

export interface HistoryEntry {
  l: number;
  k: number;
  answer: Choice;
  iteration: number;
}

export interface SessionView {
  id: string;
  status: "Running" | "UniformOptimal" | "BoundBelowTau" | "Contradiction" | "MaxIterations";
  iteration: number;
  pending_query: PendingQuery | null;
  vertex_count: number;
  mmr_bound: number;
  best_base: number[] | null;
  query_count: number;
  history: HistoryEntry[];
  trace: TraceRow[];
  config: Record<string, unknown>;
  region_vertices?: number[][];
}

export interface CreatePayload {
  instance: Record<string, unknown>;
  tau?: number | "inf";
  sense?: "min" | "max";
  max_iters?: number;
  answers?: Choice[];
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function parseOrThrow(resp: Response): Promise<SessionView> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      /* keep statusText */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as SessionView;
}

export class SessionApi {
  constructor(readonly baseUrl: string = "") {}

  async createSession(payload: CreatePayload): Promise<SessionView> {
    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return parseOrThrow(resp);
  }

  async getSession(id: string): Promise<SessionView> {
    return parseOrThrow(await fetch(`${this.baseUrl}/sessions/${id}`));
  }

  async submitAnswer(id: string, choice: Choice, iteration: number): Promise<SessionView> {
    const resp = await fetch(`${this.baseUrl}/sessions/${id}/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ choice, iteration }),
    });
    return parseOrThrow(resp);
  }

  async getTrace(id: string): Promise<{ id: string; status: string; trace: TraceRow[] }> {
    const resp = await fetch(`${this.baseUrl}/sessions/${id}/trace`);
    if (!resp.ok) throw new ApiError(resp.status, resp.statusText);
    return await resp.json();
  }
}
