/** HTTP client for the feedback service. The service base URL comes from
 * the page's ?api= query parameter (default: local dev server). */

import type {
  Condition,
  FeedbackResponse,
  HealthResponse,
  ScoreKind,
  SessionOut,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SubmitBody {
  prompt_id: string;
  text: string;
  iteration: number;
}

export interface FeedbackQuery {
  score?: ScoreKind;
  compare?: number;
}

export interface Api {
  create_session(condition: Condition, seed?: number): Promise<SessionOut>;
  submit(session_id: string, body: SubmitBody): Promise<FeedbackResponse>;
  feedback(session_id: string, ideation_id: string, query?: FeedbackQuery): Promise<FeedbackResponse>;
}

export function api_base_from_search(search: string): string {
  return new URLSearchParams(search).get("api") ?? "http://127.0.0.1:8000";
}

const JSON_HEADERS = { "content-type": "application/json" };

export class HttpApi implements Api {
  constructor(private readonly base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `network failure: ${String(err)}`);
    }
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = (await res.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = String(body.detail);
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  create_session(condition: Condition, seed?: number): Promise<SessionOut> {
    const body = seed === undefined ? { condition } : { condition, seed };
    return this.request<SessionOut>("/sessions", {
      method: "POST",
      headers: JSON_HEADERS,
      body: JSON.stringify(body),
    });
  }

  submit(session_id: string, body: SubmitBody): Promise<FeedbackResponse> {
    return this.request<FeedbackResponse>(
      `/sessions/${encodeURIComponent(session_id)}/ideations`,
      { method: "POST", headers: JSON_HEADERS, body: JSON.stringify(body) },
    );
  }

  feedback(
    session_id: string,
    ideation_id: string,
    query: FeedbackQuery = {},
  ): Promise<FeedbackResponse> {
    const params = new URLSearchParams();
    if (query.score) params.set("score", query.score);
    if (query.compare !== undefined) params.set("compare", String(query.compare));
    const qs = params.toString();
    return this.request<FeedbackResponse>(
      `/sessions/${encodeURIComponent(session_id)}/ideations/${encodeURIComponent(ideation_id)}/feedback` +
        (qs ? `?${qs}` : ""),
    );
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/health");
  }
}
