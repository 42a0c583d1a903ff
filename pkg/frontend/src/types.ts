/** Wire types mirroring the feedback service JSON. */

export type Condition = "N" | "S" | "SA" | "SAX" | "SAC" | "SAXC";

export type ScoreKind = "quality" | "diversity";

export interface PromptOut {
  id: string;
  text: string;
}

export interface SessionOut {
  session_id: string;
  condition: Condition;
  first_prompt: PromptOut;
}

export interface RecordOut {
  id: string;
  session_id: string;
  prompt_id: string;
  condition: Condition;
  iteration: number;
  text: string;
  parent?: string;
}

export interface ScoresOut {
  quality_pct: number;
  diversity_pct: number;
  diversity_raw: number;
  degenerate_embedding: boolean;
}

export interface HighlightOut {
  token: string;
  /** byte offsets [start, end) into the UTF-8 encoding of the message */
  span: [number, number];
  sub_score: number;
}

export interface EditOut {
  kind: "insertion" | "deletion";
  token: string;
  benefit: number;
}

export interface SuggestionOut {
  term: string;
  relation: string;
  dq: number;
  dd: number;
}

/** Condition-gated payload; absent fields were withheld by the condition. */
export interface PayloadOut {
  scores?: ScoresOut;
  score_kind?: ScoreKind;
  highlights?: HighlightOut[];
  edits?: EditOut[];
  suggestions?: Record<string, SuggestionOut[]>;
}

export interface FeedbackResponse {
  record: RecordOut;
  payload: PayloadOut;
  default_view: string;
  next_prompt?: PromptOut;
}

export interface HealthResponse {
  status: string;
  corpus_versions: Record<string, number>;
  model_hash: string;
}
