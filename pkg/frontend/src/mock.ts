/** Offline mock of the service API, backed by recorded fixture payloads.
 *
 * Lets the page run with no server (?mock=1): submissions return the
 * recorded feedback for that iteration regardless of the typed text, so
 * spans and scores always line up with the recorded message.
 */

import { ApiError } from "./api.js";
import type { Api, FeedbackQuery, SubmitBody } from "./api.js";
import type { Condition, FeedbackResponse, SessionOut } from "./types.js";

export interface ConditionFixture {
  session: SessionOut;
  entries: FeedbackResponse[];
}

export type Fixtures = Record<string, ConditionFixture>;

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export class MockApi implements Api {
  constructor(private readonly fixtures: Fixtures) {}

  private by_session(session_id: string): ConditionFixture {
    for (const fixture of Object.values(this.fixtures)) {
      if (fixture.session.session_id === session_id) return fixture;
    }
    throw new ApiError(404, `unknown session: ${session_id}`);
  }

  async create_session(condition: Condition): Promise<SessionOut> {
    const fixture = this.fixtures[condition];
    if (!fixture) throw new ApiError(400, `no fixture for condition: ${condition}`);
    return clone(fixture.session);
  }

  async submit(session_id: string, body: SubmitBody): Promise<FeedbackResponse> {
    const fixture = this.by_session(session_id);
    const entry = fixture.entries[body.iteration - 1];
    if (!entry) throw new ApiError(409, `no recorded iteration ${body.iteration}`);
    return clone(entry);
  }

  async feedback(
    session_id: string,
    ideation_id: string,
    query: FeedbackQuery = {},
  ): Promise<FeedbackResponse> {
    const fixture = this.by_session(session_id);
    const entry = fixture.entries.find((e) => e.record.id === ideation_id);
    if (!entry) throw new ApiError(404, `unknown ideation: ${ideation_id}`);
    if (query.compare !== undefined) {
      const condition = fixture.session.condition;
      if (condition !== "SAX" && condition !== "SAXC") {
        throw new ApiError(403, "comparison not available under this condition");
      }
      if (query.compare < 1 || query.compare >= entry.record.iteration) {
        throw new ApiError(403, `no iteration ${query.compare} to compare against`);
      }
    }
    return clone(entry);
  }
}

/** Fetch the recorded fixtures relative to the page. */
export async function load_fixtures(url = "./fixtures/conditions.json"): Promise<Fixtures> {
  const res = await fetch(url);
  if (!res.ok) throw new ApiError(res.status, `cannot load fixtures from ${url}`);
  return (await res.json()) as Fixtures;
}
