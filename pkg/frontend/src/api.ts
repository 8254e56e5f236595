// Typed client for the chatscreen HTTP API. The UI computes no risk of its
// own: everything rendered comes from these response payloads.

export type RiskLevel = "none" | "elevated" | "high";

export interface Question {
  id: string;
  text: string;
}

export interface Aggregate {
  max_prob: number;
  ewma_prob: number;
  flagged_count: number;
  level: RiskLevel;
}

export interface CreateSessionResponse {
  session_id: string;
  question: Question;
}

export interface MessageResponse {
  score: number;
  next_question: Question;
  aggregate: Aggregate;
}

export interface TranscriptEntry {
  role: "bot" | "user";
  text: string;
  timestamp: string;
}

export interface FlaggedMessage {
  transcript_index: number;
  text: string;
  probability: number;
}

export interface Report {
  session_id: string;
  generated_at: string;
  state: string;
  transcript: TranscriptEntry[];
  scores: number[];
  flagged: FlaggedMessage[];
  aggregate: Aggregate;
  recommended_action: string;
  model_checksum: string;
  other_findings: unknown[];
}

export interface HealthResponse {
  status: string;
  model_checksum: string;
}

/** Runtime configuration, loaded from config.json next to index.html. */
export interface ClientConfig {
  apiBaseUrl: string;
  token?: string | null;
}

export class ApiError extends Error {
  /** HTTP status; 0 means the server was unreachable. */
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }

  get unreachable(): boolean {
    return this.status === 0;
  }

  get unauthorized(): boolean {
    return this.status === 401;
  }

  get notFound(): boolean {
    return this.status === 404;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly token: string | null;
  private readonly fetchFn: FetchLike;

  constructor(config: ClientConfig, fetchFn?: FetchLike) {
    this.base = config.apiBaseUrl.replace(/\/+$/, "");
    this.token = config.token ?? null;
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch {
      throw new ApiError(0, "server unreachable");
    }
    if (!response.ok) {
      let detail = response.statusText || `HTTP ${response.status}`;
      try {
        const payload = await response.json();
        if (payload && typeof payload.detail === "string") {
          detail = payload.detail;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<CreateSessionResponse> {
    return this.request<CreateSessionResponse>("POST", "/v1/sessions");
  }

  postMessage(sessionId: string, text: string): Promise<MessageResponse> {
    return this.request<MessageResponse>(
      "POST", `/v1/sessions/${encodeURIComponent(sessionId)}/messages`, { text });
  }

  getReport(sessionId: string): Promise<Report> {
    return this.request<Report>(
      "GET", `/v1/sessions/${encodeURIComponent(sessionId)}/report`);
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("GET", "/v1/health");
  }
}
