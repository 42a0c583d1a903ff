/** Pure HTML renderers: every view is a function of state plus API payloads.
 *
 * No score arithmetic happens here. Numbers on screen are API fields run
 * through formatting only; colors are 3-step ramps over value terciles.
 */

import type { AppState } from "./controller.js";
import type {
  EditOut,
  FeedbackResponse,
  HighlightOut,
  PayloadOut,
  RecordOut,
  SuggestionOut,
} from "./types.js";
import type { ViewState } from "./state.js";

export function escape_html(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function fmt_pct(value: number): string {
  return `${value.toFixed(1)}%`;
}

export function fmt_signed(value: number, digits: number): string {
  return `${value >= 0 ? "+" : ""}${value.toFixed(digits)}`;
}

/** Tercile bucket 0..2 of value within [lo, hi]; single-valued range maps
 * to the darkest step so a lone item reads as "the one that matters". */
export function tercile(value: number, lo: number, hi: number): number {
  if (hi <= lo) return 2;
  return Math.min(2, Math.floor(((value - lo) / (hi - lo)) * 3));
}

function utf8_length(code_point: number): number {
  if (code_point < 0x80) return 1;
  if (code_point < 0x800) return 2;
  if (code_point < 0x10000) return 3;
  return 4;
}

/** Map UTF-8 byte offsets to UTF-16 string indices (code point boundaries
 * only; offsets inside a multi-byte character are absent). */
export function byte_index_map(text: string): Map<number, number> {
  const map = new Map<number, number>();
  let byte = 0;
  let idx = 0;
  for (const ch of text) {
    map.set(byte, idx);
    byte += utf8_length(ch.codePointAt(0) as number);
    idx += ch.length;
  }
  map.set(byte, idx);
  return map;
}

interface ResolvedSpan {
  start: number; // UTF-16 index
  end: number;
  highlight: HighlightOut;
}

function resolve_spans(text: string, highlights: HighlightOut[]): ResolvedSpan[] | null {
  const map = byte_index_map(text);
  const sorted = [...highlights].sort((a, b) => a.span[0] - b.span[0]);
  const resolved: ResolvedSpan[] = [];
  let cursor = 0;
  for (const h of sorted) {
    const start = map.get(h.span[0]);
    const end = map.get(h.span[1]);
    if (start === undefined || end === undefined || start < cursor || end < start) return null;
    if (text.slice(start, end).toLowerCase() !== h.token) return null;
    resolved.push({ start, end, highlight: h });
    cursor = end;
  }
  return resolved;
}

/** Message text with red attribution highlights.
 *
 * Spans are byte offsets from the API; if any span fails to line up with
 * the text the whole message renders unhighlighted and a diagnostic goes
 * to the console. Shade darkens with change priority (= -sub_score).
 */
export function render_message_with_highlights(text: string, highlights: HighlightOut[]): string {
  if (highlights.length === 0) return escape_html(text);
  const spans = resolve_spans(text, highlights);
  if (spans === null) {
    console.error(`highlight spans do not match message text; rendering plain: ${JSON.stringify(text)}`);
    return escape_html(text);
  }
  const priorities = highlights.map((h) => -h.sub_score);
  const lo = Math.min(...priorities);
  const hi = Math.max(...priorities);
  const parts: string[] = [];
  let cursor = 0;
  for (const { start, end, highlight } of spans) {
    parts.push(escape_html(text.slice(cursor, start)));
    const shade = tercile(-highlight.sub_score, lo, hi);
    parts.push(
      `<mark class="hl hl-r${shade}" data-token="${escape_html(highlight.token)}"` +
        ` title="sub-score ${fmt_signed(highlight.sub_score, 1)}">` +
        `${escape_html(text.slice(start, end))}</mark>`,
    );
    cursor = end;
  }
  parts.push(escape_html(text.slice(cursor)));
  return parts.join("");
}

const WORD_RE = /[\p{L}\p{N}']+/gu;

/** Contrastive view of a revision: inserted words underlined in place,
 * deleted words struck through after the message. Benefits (API values,
 * score points) ride along as superscripts. */
export function render_diff(text: string, edits: EditOut[]): string {
  const insert_queue = new Map<string, number[]>();
  for (const e of edits) {
    if (e.kind !== "insertion") continue;
    const queue = insert_queue.get(e.token) ?? [];
    queue.push(e.benefit);
    insert_queue.set(e.token, queue);
  }
  const parts: string[] = [];
  let cursor = 0;
  for (const match of text.matchAll(WORD_RE)) {
    const word = match[0];
    const queue = insert_queue.get(word.toLowerCase());
    if (!queue || queue.length === 0) continue;
    const benefit = queue.shift() as number;
    parts.push(escape_html(text.slice(cursor, match.index)));
    parts.push(
      `<u class="ins">${escape_html(word)}</u>` +
        `<sup class="benefit">${fmt_signed(benefit, 2)}%</sup>`,
    );
    cursor = match.index + word.length;
  }
  parts.push(escape_html(text.slice(cursor)));
  const deletions = edits.filter((e) => e.kind === "deletion");
  if (deletions.length > 0) {
    const struck = deletions.map(
      (e) =>
        `<del class="del">${escape_html(e.token)}</del>` +
        `<sup class="benefit">${fmt_signed(e.benefit, 2)}%</sup>`,
    );
    parts.push(` <span class="removed">deleted: ${struck.join(" ")}</span>`);
  }
  return parts.join("");
}

/** One row per iteration; score columns only when the condition shows
 * scores (condition N gets a bare two-column table). The newest row
 * switches to the contrastive diff when compare mode is on. */
export function render_iteration_table(
  records: RecordOut[],
  payload: Record<string, PayloadOut>,
  view: ViewState,
): string {
  if (records.length === 0) throw new Error("iteration table needs at least one record");
  const rows = [...records].sort((a, b) => a.iteration - b.iteration);
  const latest = rows[rows.length - 1] as RecordOut;
  const head_cells = ["Iteration", "Message"];
  if (view.flags.show_scores) head_cells.push("Quality", "Diversity");
  const head = head_cells
    .map((name) => {
      const selected =
        view.flags.show_attribution && name.toLowerCase() === view.selected_score;
      return `<th${selected ? ' class="selected"' : ""}>${name}</th>`;
    })
    .join("");
  const body = rows
    .map((record) => {
      const p = payload[record.id] ?? {};
      let message: string;
      const comparing =
        record.id === latest.id &&
        view.compare_target !== null &&
        view.flags.show_contrast &&
        (p.edits?.length ?? 0) > 0;
      if (comparing) {
        message = render_diff(record.text, p.edits as EditOut[]);
      } else if (view.flags.show_attribution && (p.highlights?.length ?? 0) > 0) {
        message = render_message_with_highlights(record.text, p.highlights as HighlightOut[]);
      } else {
        message = escape_html(record.text);
      }
      const cells = [`<td class="iter">${record.iteration}</td>`, `<td class="msg">${message}</td>`];
      if (view.flags.show_scores) {
        cells.push(
          `<td class="score">${p.scores ? fmt_pct(p.scores.quality_pct) : ""}</td>`,
          `<td class="score">${p.scores ? fmt_pct(p.scores.diversity_pct) : ""}</td>`,
        );
      }
      return `<tr data-record="${escape_html(record.id)}">${cells.join("")}</tr>`;
    })
    .join("");
  return `<table class="iterations"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

/** Hover popup for a highlighted word: its attribution sub-score plus up
 * to three replacement suggestions with both projected score deltas,
 * shaded blue by the larger delta. Empty list: sub-score only. */
export function render_suggestion_popup(token: HighlightOut, suggestions: SuggestionOut[]): string {
  const head =
    `<div class="popup-head"><strong>${escape_html(token.token)}</strong>` +
    ` <span class="sub-score">sub-score ${fmt_signed(token.sub_score, 1)}</span></div>`;
  if (suggestions.length === 0) {
    return `<div class="popup" data-token="${escape_html(token.token)}">${head}</div>`;
  }
  const shown = suggestions.slice(0, 3);
  const magnitudes = shown.map((s) => Math.max(s.dq, s.dd));
  const lo = Math.min(...magnitudes);
  const hi = Math.max(...magnitudes);
  const items = shown
    .map((s) => {
      const shade = tercile(Math.max(s.dq, s.dd), lo, hi);
      return (
        `<li class="sg sg-b${shade}"><span class="term">${escape_html(s.term)}</span>` +
        ` <span class="delta">${fmt_signed(s.dq, 1)}% quality</span>` +
        ` <span class="delta">${fmt_signed(s.dd, 1)}% diversity</span>` +
        ` <span class="rel">${escape_html(s.relation)}</span></li>`
      );
    })
    .join("");
  return (
    `<div class="popup" data-token="${escape_html(token.token)}">${head}` +
    `<ul class="suggestions">${items}</ul></div>`
  );
}

function render_controls(state: AppState): string {
  const { view, entries } = state;
  if (entries.length === 0) return "";
  const latest = entries[entries.length - 1] as FeedbackResponse;
  const parts: string[] = [];
  if (view.flags.show_attribution) {
    const buttons = (["diversity", "quality"] as const)
      .map(
        (kind) =>
          `<button data-action="score" data-kind="${kind}"` +
          ` aria-pressed="${view.selected_score === kind}">${kind}</button>`,
      )
      .join("");
    parts.push(`<div class="score-toggle">explain: ${buttons}</div>`);
  }
  if (view.flags.show_contrast && latest.record.iteration >= 2) {
    const targets: string[] = [];
    for (let t = 1; t < latest.record.iteration; t += 1) {
      targets.push(
        `<button data-action="compare" data-target="${t}"` +
          ` aria-pressed="${view.compare_target === t}">vs iteration ${t}</button>`,
      );
    }
    targets.push(
      `<button data-action="compare" data-target=""` +
        ` aria-pressed="${view.compare_target === null}">latest only</button>`,
    );
    parts.push(`<div class="compare-toggle">compare: ${targets.join("")}</div>`);
  }
  return parts.join("");
}

function render_popup_for_hover(state: AppState): string {
  const { view, entries } = state;
  if (!view.flags.show_counterfactual || view.hover_token === null || entries.length === 0) {
    return "";
  }
  const payload = (entries[entries.length - 1] as FeedbackResponse).payload;
  const token = (payload.highlights ?? []).find((h) => h.token === view.hover_token);
  if (!token) return "";
  const suggestions = payload.suggestions?.[token.token] ?? [];
  return render_suggestion_popup(token, suggestions);
}

function render_compose(state: AppState): string {
  if (state.all_done) {
    return `<div class="done all-done">All prompts complete.</div>`;
  }
  if (state.prompt_done) {
    const next = state.next_prompt
      ? ` <button data-action="next-prompt">Next prompt</button>`
      : "";
    return `<div class="done">Revision round complete.${next}</div>`;
  }
  const iteration = state.entries.length + 1;
  return (
    `<div class="compose"><textarea id="draft" rows="3"` +
    ` placeholder="Write your idea here">${escape_html(state.draft)}</textarea>` +
    `<button data-action="submit"${state.in_flight ? " disabled" : ""}>` +
    `Submit iteration ${iteration}</button></div>`
  );
}

/** Whole-page view. Pure: same state, same markup. */
export function render_app(state: AppState): string {
  const condition = state.session?.condition ?? "N";
  const parts: string[] = [
    `<header><h1>ideafeed</h1><span class="cond">condition ${condition}</span></header>`,
  ];
  if (state.prompt) {
    parts.push(`<section class="prompt">Prompt: <em>${escape_html(state.prompt.text)}</em></section>`);
  }
  if (state.banner) {
    parts.push(
      `<div class="banner" role="alert">${escape_html(state.banner)}` +
        ` <button data-action="submit">Retry</button></div>`,
    );
  }
  if (state.entries.length > 0) {
    const records = state.entries.map((e) => e.record);
    const payload = Object.fromEntries(state.entries.map((e) => [e.record.id, e.payload]));
    parts.push(render_iteration_table(records, payload, state.view));
    parts.push(render_controls(state));
    parts.push(render_popup_for_hover(state));
  }
  parts.push(render_compose(state));
  return `<div class="app condition-${condition}">${parts.join("")}</div>`;
}
