/** View state: which controls and explanation layers the UI exposes. */

import type { Condition, FeedbackResponse, ScoreKind, SessionOut } from "./types.js";

export interface ConditionFlags {
  show_scores: boolean;
  show_attribution: boolean;
  show_contrast: boolean;
  show_counterfactual: boolean;
}

const FLAG_TABLE: Record<Condition, ConditionFlags> = {
  N: { show_scores: false, show_attribution: false, show_contrast: false, show_counterfactual: false },
  S: { show_scores: true, show_attribution: false, show_contrast: false, show_counterfactual: false },
  SA: { show_scores: true, show_attribution: true, show_contrast: false, show_counterfactual: false },
  SAX: { show_scores: true, show_attribution: true, show_contrast: true, show_counterfactual: false },
  SAC: { show_scores: true, show_attribution: true, show_contrast: false, show_counterfactual: true },
  SAXC: { show_scores: true, show_attribution: true, show_contrast: true, show_counterfactual: true },
};

export function condition_flags(condition: Condition): ConditionFlags {
  const flags = FLAG_TABLE[condition];
  if (!flags) throw new Error(`unknown condition: ${condition}`);
  return flags;
}

export interface ViewState {
  session: SessionOut | null;
  flags: ConditionFlags;
  selected_score: ScoreKind;
  compare_target: number | null;
  hover_token: string | null;
}

export function initial_view(session: SessionOut | null): ViewState {
  return {
    session,
    flags: session ? condition_flags(session.condition) : condition_flags("N"),
    selected_score: "diversity",
    compare_target: null,
    hover_token: null,
  };
}

/** Compare mode engages by default from the second iteration on, when the
 * condition exposes contrastive edits at all. */
export function default_compare(flags: ConditionFlags, iteration: number): number | null {
  return flags.show_contrast && iteration >= 2 ? iteration - 1 : null;
}

export function view_after_feedback(view: ViewState, fb: FeedbackResponse): ViewState {
  const kind = fb.payload.score_kind ?? view.selected_score;
  return {
    ...view,
    selected_score: kind,
    compare_target: default_compare(view.flags, fb.record.iteration),
    hover_token: null,
  };
}
