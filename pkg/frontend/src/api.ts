// Thin typed client over the service HTTP API. The console never computes
// scores or query answers itself; everything displayed comes from here.

import type {
  AgentTrace,
  ApiErrorBody,
  AskResult,
  QueryResult,
  SceneGraphResult,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly offset?: number;

  constructor(status: number, code: string, message: string, offset?: number) {
    super(message);
    this.status = status;
    this.code = code;
    this.offset = offset;
  }
}

async function asApiError(response: Response): Promise<ApiError> {
  let code = "backend_unavailable";
  let message = `service returned status ${response.status}`;
  let offset: number | undefined;
  try {
    const body = (await response.json()) as ApiErrorBody;
    if (body?.error?.code) {
      code = body.error.code;
      message = body.error.message;
      offset = body.error.detail?.offset ?? undefined;
    }
  } catch {
    // non-JSON error body; keep the status-based message
  }
  return new ApiError(response.status, code, message, offset);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "backend_unavailable", `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw await asApiError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/v1/health");
  }

  createSession(manifestPath: string): Promise<SessionSummary> {
    return this.request("POST", "/v1/sessions", { manifest_path: manifestPath });
  }

  ask(sessionId: string, question: string): Promise<AskResult> {
    return this.request("POST", `/v1/sessions/${sessionId}/ask`, { question });
  }

  generateSceneGraph(sessionId: string): Promise<SceneGraphResult> {
    return this.request("POST", `/v1/sessions/${sessionId}/scenegraph`);
  }

  query(sessionId: string, query: string): Promise<QueryResult> {
    return this.request("POST", `/v1/sessions/${sessionId}/graphql-query`, { query });
  }

  getTrace(traceRef: string): Promise<AgentTrace> {
    return this.request("GET", `/v1/traces/${traceRef}`);
  }
}
