/** Typed client for the estimation service HTTP API. */

export interface SessionSummary {
  id: string;
  m: number;
  n: number;
  window: number | null;
  mode: string;
  steps: number;
  pending: boolean;
}

export interface Constraint {
  index: number;
  lhs: number[];
  rhs: number;
}

export interface Vertex {
  point: number[];
  active_set: number[];
  plan: number[][];
}

export interface Edge {
  from: number;
  to: number;
  constraint: number | null;
}

export interface Situation {
  supply: number[];
  demand: number[];
  d: number;
  constraints: Constraint[];
  vertices: Vertex[];
  edges: Edge[];
}

export interface Observation {
  pair: number[];
  weight: number;
  vector: number[];
}

export interface DecisionResult {
  step: number;
  observation: Observation;
  estimate: number[] | null;
}

export interface EstimateRecord {
  step: number;
  e: number[] | null;
  sums: number[];
}

export interface StopInfo {
  stop: boolean;
  mean_delta: number | null;
  std_delta: number | null;
}

export interface EstimatePayload {
  steps: number;
  estimate: number[] | null;
  history: EstimateRecord[];
  deltas: (number | null)[];
  stop: StopInfo;
}

export interface Proposal {
  vertex: number[];
  plan: number[][];
  active_pair: number[] | null;
  estimate: number[];
}

export interface DecisionRow {
  step: number;
  point: number[];
  source: string;
  pair: number[];
  weight: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly error: string;
  readonly detail: string;

  constructor(status: number, error: string, detail: string) {
    super(`${error}: ${detail}`);
    this.status = status;
    this.error = error;
    this.detail = detail;
  }
}

interface CreateSessionOptions {
  m?: number;
  n?: number;
  window?: number | null;
  mode?: string;
}

interface GenerateOptions {
  lo?: number;
  hi?: number;
  seed?: number | null;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let resp: Response;
    try {
      resp = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, "NetworkError", String(err));
    }
    const data: unknown = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const rec = (data ?? {}) as Record<string, unknown>;
      const name = typeof rec.error === "string" ? rec.error : `HTTP ${resp.status}`;
      const detail =
        typeof rec.detail === "string" ? rec.detail : JSON.stringify(rec.detail ?? rec);
      throw new ApiError(resp.status, name, detail);
    }
    return data as T;
  }

  createSession(options: CreateSessionOptions = {}): Promise<SessionSummary> {
    return this.request("POST", "/sessions", options);
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${id}`);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/sessions/${id}`);
  }

  submitSituation(
    id: string,
    supply: number[],
    demand: number[],
  ): Promise<{ situation: Situation }> {
    return this.request("POST", `/sessions/${id}/situation`, { supply, demand });
  }

  generateSituation(id: string, options: GenerateOptions = {}): Promise<{ situation: Situation }> {
    return this.request("POST", `/sessions/${id}/situation/generate`, options);
  }

  getSituation(id: string): Promise<{ situation: Situation }> {
    return this.request("GET", `/sessions/${id}/situation`);
  }

  decide(id: string, point: number[]): Promise<DecisionResult> {
    return this.request("POST", `/sessions/${id}/decision`, { point });
  }

  getEstimate(id: string): Promise<EstimatePayload> {
    return this.request("GET", `/sessions/${id}/estimate`);
  }

  getDecisions(id: string): Promise<{ decisions: DecisionRow[] }> {
    return this.request("GET", `/sessions/${id}/decisions`);
  }

  getProposal(id: string): Promise<Proposal> {
    return this.request("GET", `/sessions/${id}/proposal`);
  }

  approveProposal(id: string): Promise<DecisionResult> {
    return this.request("POST", `/sessions/${id}/proposal/approve`);
  }

  correctProposal(id: string, point: number[]): Promise<DecisionResult> {
    return this.request("POST", `/sessions/${id}/proposal/correct`, { point });
  }
}
