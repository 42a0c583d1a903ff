/** Browser shell: mounts the app, delegates DOM events to the controller,
 * rerenders on every state change. Query parameters:
 *
 *   ?api=http://host:port   service base URL (default http://127.0.0.1:8000)
 *   ?condition=SAXC         feedback condition for the new session
 *   ?seed=7                 deterministic prompt draw
 *   ?mock=1                 run against bundled recorded fixtures, no server
 */

import { HttpApi, api_base_from_search } from "./api.js";
import { App } from "./controller.js";
import { MockApi, load_fixtures } from "./mock.js";
import { render_app } from "./render.js";
import type { Condition, ScoreKind } from "./types.js";

const CONDITION_SET = new Set(["N", "S", "SA", "SAX", "SAC", "SAXC"]);

function wire(root: HTMLElement, app: App): void {
  root.addEventListener("click", (ev) => {
    const el = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!el) return;
    const action = el.dataset.action;
    if (action === "submit") {
      const draft = root.querySelector<HTMLTextAreaElement>("#draft");
      void app.submit_and_advance(draft ? draft.value : app.state.draft);
    } else if (action === "score") {
      void app.set_score(el.dataset.kind as ScoreKind);
    } else if (action === "compare") {
      const raw = el.dataset.target ?? "";
      void app.set_compare(raw === "" ? null : Number(raw));
    } else if (action === "next-prompt") {
      app.continue_to_next_prompt();
    }
  });
  root.addEventListener("input", (ev) => {
    const el = ev.target as HTMLElement;
    if (el.id === "draft") app.note_draft((el as HTMLTextAreaElement).value);
  });
  // hover popups; the controller ignores these under non-counterfactual conditions
  root.addEventListener("mouseover", (ev) => {
    const mark = (ev.target as HTMLElement).closest<HTMLElement>("mark[data-token]");
    if (mark) app.set_hover(mark.dataset.token ?? null);
  });
  root.addEventListener("mouseout", (ev) => {
    const mark = (ev.target as HTMLElement).closest<HTMLElement>("mark[data-token]");
    if (mark) app.set_hover(null);
  });
}

async function main(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const api = params.has("mock")
    ? new MockApi(await load_fixtures())
    : new HttpApi(api_base_from_search(window.location.search));
  const app = new App(api, (state) => {
    root.innerHTML = render_app(state);
  });
  wire(root, app);
  const condition = params.get("condition") ?? "SAXC";
  if (!CONDITION_SET.has(condition)) {
    root.textContent = `unknown condition: ${condition}`;
    return;
  }
  const seed = params.get("seed");
  try {
    await app.start(condition as Condition, seed === null ? undefined : Number(seed));
  } catch (err) {
    root.textContent = `could not open a session: ${String(err)}`;
  }
}

void main();
