import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { AppState } from "../src/controller.js";
import type { ConditionFixture, Fixtures } from "../src/mock.js";
import { initial_view, view_after_feedback } from "../src/state.js";
import type { FeedbackResponse, HighlightOut, SuggestionOut } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function load_condition_fixtures(): Fixtures {
  const raw = readFileSync(join(here, "..", "fixtures", "conditions.json"), "utf8");
  return JSON.parse(raw) as Fixtures;
}

export interface Fig8Fixture {
  message: string;
  token: HighlightOut;
  suggestions: SuggestionOut[];
}

export function load_fig8(): Fig8Fixture {
  const raw = readFileSync(join(here, "..", "fixtures", "fig8.json"), "utf8");
  return JSON.parse(raw) as Fig8Fixture;
}

/** App state as it stands after the first `upto` recorded iterations. */
export function state_after(fixture: ConditionFixture, upto: number): AppState {
  const entries = fixture.entries.slice(0, upto);
  if (entries.length === 0) throw new Error("need at least one entry");
  let view = initial_view(fixture.session);
  for (const entry of entries) view = view_after_feedback(view, entry);
  const last = entries[entries.length - 1] as FeedbackResponse;
  const prompt_done = last.record.iteration >= 3;
  return {
    session: fixture.session,
    prompt: fixture.session.first_prompt,
    next_prompt: last.next_prompt ?? null,
    entries,
    view,
    draft: prompt_done ? "" : last.record.text,
    banner: null,
    prompt_done,
    all_done: prompt_done && !last.next_prompt,
    in_flight: false,
  };
}
