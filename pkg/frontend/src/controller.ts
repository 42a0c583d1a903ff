/** Session controller: owns the app state and talks to the service.
 *
 * All service calls are sequenced: at most one submission in flight, and
 * every response carries the sequence number it was issued under, so a
 * response that arrives after a newer request started is discarded.
 */

import { ApiError } from "./api.js";
import type { Api } from "./api.js";
import { initial_view, view_after_feedback } from "./state.js";
import type { ViewState } from "./state.js";
import type { Condition, FeedbackResponse, PromptOut, ScoreKind, SessionOut } from "./types.js";

export const MAX_ITERATIONS = 3;

export interface AppState {
  session: SessionOut | null;
  /** prompt currently being answered; pinned across the revision round */
  prompt: PromptOut | null;
  /** prompt the service queued after the round completed */
  next_prompt: PromptOut | null;
  entries: FeedbackResponse[];
  view: ViewState;
  draft: string;
  banner: string | null;
  prompt_done: boolean;
  all_done: boolean;
  in_flight: boolean;
}

export function initial_state(): AppState {
  return {
    session: null,
    prompt: null,
    next_prompt: null,
    entries: [],
    view: initial_view(null),
    draft: "",
    banner: null,
    prompt_done: false,
    all_done: false,
    in_flight: false,
  };
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.status > 0 ? `HTTP ${err.status}: ${err.message}` : err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}

export class App {
  state: AppState;
  private seq = 0;

  constructor(
    private readonly api: Api,
    private readonly onchange: (state: AppState) => void = () => {},
  ) {
    this.state = initial_state();
  }

  private set(state: AppState): void {
    this.state = state;
    this.onchange(state);
  }

  private latest(): FeedbackResponse | null {
    return this.state.entries.length > 0
      ? (this.state.entries[this.state.entries.length - 1] as FeedbackResponse)
      : null;
  }

  async start(condition: Condition, seed?: number): Promise<AppState> {
    const session = await this.api.create_session(condition, seed);
    this.set({
      ...initial_state(),
      session,
      prompt: session.first_prompt,
      view: initial_view(session),
    });
    return this.state;
  }

  /** Record the textarea content without triggering a rerender. */
  note_draft(text: string): void {
    this.state = { ...this.state, draft: text };
  }

  /** Submit one iteration; on success the new feedback row appears and the
   * draft becomes the submitted text, ready to revise. On failure the
   * draft is untouched and a retry banner goes up. */
  async submit_and_advance(text: string): Promise<AppState> {
    const s = this.state;
    if (s.in_flight || !s.session || !s.prompt || s.prompt_done || s.all_done) return s;
    if (text.trim().length === 0) {
      this.set({ ...s, banner: "Write a message before submitting." });
      return this.state;
    }
    const iteration = s.entries.length + 1;
    const seq = ++this.seq;
    this.set({ ...s, in_flight: true, draft: text, banner: null });
    let fb: FeedbackResponse;
    try {
      fb = await this.api.submit(s.session.session_id, {
        prompt_id: s.prompt.id,
        text,
        iteration,
      });
    } catch (err) {
      if (seq === this.seq) {
        this.set({
          ...this.state,
          in_flight: false,
          banner: `Submission failed (${describe(err)}). Your text is kept; retry when ready.`,
        });
      }
      return this.state;
    }
    if (seq !== this.seq) return this.state;
    const prompt_done = fb.record.iteration >= MAX_ITERATIONS;
    this.set({
      ...this.state,
      in_flight: false,
      entries: [...this.state.entries, fb],
      view: view_after_feedback(this.state.view, fb),
      draft: prompt_done ? "" : fb.record.text,
      next_prompt: fb.next_prompt ?? null,
      prompt_done,
      all_done: prompt_done && !fb.next_prompt,
    });
    return this.state;
  }

  /** Re-render the newest feedback under the other score kind. */
  async set_score(kind: ScoreKind): Promise<AppState> {
    const s = this.state;
    const latest = this.latest();
    if (!s.session || !latest || !s.view.flags.show_attribution) return s;
    if (kind === s.view.selected_score) return s;
    const seq = ++this.seq;
    try {
      const fb = await this.api.feedback(s.session.session_id, latest.record.id, {
        score: kind,
        compare: s.view.compare_target ?? undefined,
      });
      if (seq !== this.seq) return this.state;
      this.replace_latest(fb, { selected_score: kind });
    } catch (err) {
      if (seq === this.seq) this.set({ ...this.state, banner: describe(err) });
    }
    return this.state;
  }

  /** Compare the newest revision against an earlier iteration; null turns
   * compare mode off (no refetch needed, the default payload already
   * holds the parent diff). */
  async set_compare(target: number | null): Promise<AppState> {
    const s = this.state;
    const latest = this.latest();
    if (!s.session || !latest || !s.view.flags.show_contrast) return s;
    if (target === null) {
      this.set({ ...s, view: { ...s.view, compare_target: null } });
      return this.state;
    }
    if (target < 1 || target >= latest.record.iteration) return s;
    const seq = ++this.seq;
    try {
      const fb = await this.api.feedback(s.session.session_id, latest.record.id, {
        score: s.view.selected_score,
        compare: target,
      });
      if (seq !== this.seq) return this.state;
      this.replace_latest(fb, { compare_target: target });
    } catch (err) {
      if (seq === this.seq) this.set({ ...this.state, banner: describe(err) });
    }
    return this.state;
  }

  set_hover(token: string | null): void {
    if (!this.state.view.flags.show_counterfactual) return;
    if (token === this.state.view.hover_token) return;
    this.set({ ...this.state, view: { ...this.state.view, hover_token: token } });
  }

  continue_to_next_prompt(): AppState {
    const s = this.state;
    if (!s.prompt_done || !s.next_prompt || !s.session) return s;
    this.set({
      ...s,
      prompt: s.next_prompt,
      next_prompt: null,
      entries: [],
      view: initial_view(s.session),
      draft: "",
      banner: null,
      prompt_done: false,
    });
    return this.state;
  }

  private replace_latest(fb: FeedbackResponse, view_patch: Partial<ViewState>): void {
    const entries = [...this.state.entries.slice(0, -1), fb];
    this.set({
      ...this.state,
      entries,
      banner: null,
      view: { ...this.state.view, ...view_patch, hover_token: null },
    });
  }
}
