/** Application wiring: form controls, query lifecycle, and rendering.
 *
 * Concurrency contract: at most one query is in flight. A new submission
 * aborts the previous request and invalidates its state ticket, so a slow
 * older response can never overwrite a newer one — even if the transport
 * ignores the abort signal.
 */

import { ApiClient, ApiError, type FetchLike } from "./api";
import {
  clear,
  renderBreadcrumb,
  renderGroupPanels,
  renderImportantWords,
  renderNotice,
  renderResults,
} from "./render";
import { ViewState, type QueryMode } from "./state";

export interface AppOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
}

export interface GroupSpecEntry {
  label: string;
  members: string[];
}

/** Parse the group textarea: one `label: id, id ...` line per group.
 * Members split on commas/whitespace; blank lines are skipped; a line
 * without a colon is treated as a label with no members. */
export function parseGroupSpec(text: string): GroupSpecEntry[] {
  const entries: GroupSpecEntry[] = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line) {
      continue;
    }
    const colon = line.indexOf(":");
    const label = (colon < 0 ? line : line.slice(0, colon)).trim();
    const rest = colon < 0 ? "" : line.slice(colon + 1);
    const members = rest.split(/[\s,]+/).filter((id) => id.length > 0);
    if (label) {
      entries.push({ label, members });
    }
  }
  return entries;
}

const TEMPLATE = `
  <header class="app-header">
    <h1>Literature similarity explorer</h1>
    <span id="health" class="health"></span>
  </header>
  <form id="query-form" class="query-form">
    <select id="mode" aria-label="Query mode">
      <option value="by-id">Document id</option>
      <option value="free-text">Free text</option>
    </select>
    <input id="query-input" type="text" aria-label="Query"
           placeholder="e.g. astro-ph/0601001" />
    <label class="k-label">k
      <input id="k-input" type="number" min="1" value="30" aria-label="Result count" />
    </label>
    <button type="submit">Search</button>
  </form>
  <div id="notices" class="notices" aria-live="polite"></div>
  <nav id="breadcrumb" class="breadcrumb" aria-label="Query trail"></nav>
  <main class="panes">
    <section class="pane">
      <h2>Most similar documents</h2>
      <div id="results"></div>
    </section>
    <section class="pane">
      <h2>Important words</h2>
      <div id="important-words"></div>
    </section>
  </main>
  <section class="pane">
    <h2>Compare groups</h2>
    <form id="group-form" class="group-form">
      <textarea id="group-input" rows="3" aria-label="Group spec"
                placeholder="label: doc-id, doc-id"></textarea>
      <button type="submit">Compare against seed</button>
    </form>
    <div id="group-panels"></div>
  </section>
`;

export class App {
  readonly state = new ViewState();
  readonly client: ApiClient;
  readonly root: HTMLElement;

  private inflight: AbortController | null = null;
  private readonly ui: {
    mode: HTMLSelectElement;
    queryInput: HTMLInputElement;
    kInput: HTMLInputElement;
    notices: HTMLElement;
    breadcrumb: HTMLElement;
    results: HTMLElement;
    importantWords: HTMLElement;
    groupInput: HTMLTextAreaElement;
    groupPanels: HTMLElement;
    health: HTMLElement;
  };

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.root = root;
    this.client = new ApiClient(options.baseUrl ?? "", options.fetchFn);
    root.innerHTML = TEMPLATE;
    const pick = <T extends HTMLElement>(id: string): T => {
      const node = root.querySelector<T>(`#${id}`);
      if (!node) {
        throw new Error(`missing app element: ${id}`);
      }
      return node;
    };
    this.ui = {
      mode: pick<HTMLSelectElement>("mode"),
      queryInput: pick<HTMLInputElement>("query-input"),
      kInput: pick<HTMLInputElement>("k-input"),
      notices: pick<HTMLElement>("notices"),
      breadcrumb: pick<HTMLElement>("breadcrumb"),
      results: pick<HTMLElement>("results"),
      importantWords: pick<HTMLElement>("important-words"),
      groupInput: pick<HTMLTextAreaElement>("group-input"),
      groupPanels: pick<HTMLElement>("group-panels"),
      health: pick<HTMLElement>("health"),
    };

    pick<HTMLFormElement>("query-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitQuery(this.ui.mode.value as QueryMode, this.ui.queryInput.value.trim());
    });
    pick<HTMLFormElement>("group-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitGroups(this.ui.groupInput.value);
    });
    this.ui.mode.addEventListener("change", () => {
      this.ui.queryInput.placeholder =
        this.ui.mode.value === "by-id" ? "e.g. astro-ph/0601001" : "e.g. expanding supernova shells";
    });
  }

  private get k(): number {
    const parsed = Number.parseInt(this.ui.kInput.value, 10);
    return Number.isFinite(parsed) && parsed >= 1 ? parsed : 30;
  }

  private beginRequest(): { token: number; signal: AbortSignal } {
    this.inflight?.abort();
    this.inflight = new AbortController();
    return { token: this.state.begin(), signal: this.inflight.signal };
  }

  /** Run one ranked-similarity query and render its outcome. */
  async submitQuery(
    mode: QueryMode,
    value: string,
    options: { extendTrail?: boolean } = {},
  ): Promise<void> {
    if (!value) {
      renderNotice(this.ui.notices, "error", "Enter a document id or some text first.");
      return;
    }
    const { token, signal } = this.beginRequest();
    const request = { k: this.k, importantWords: true, signal };
    try {
      const response =
        mode === "by-id"
          ? await this.client.similarById(value, request)
          : await this.client.similarByText(value, request);
      if (!this.state.acceptResponse(token, { mode, value }, response, options)) {
        return; // superseded by a newer submission
      }
      clear(this.ui.notices);
      renderBreadcrumb(this.ui.breadcrumb, this.state.breadcrumb);
      renderResults(this.ui.results, response, (docId) => {
        void this.submitQuery("by-id", docId, { extendTrail: true });
      });
      renderImportantWords(this.ui.importantWords, response.important_words ?? []);
      clear(this.ui.groupPanels);
    } catch (error) {
      this.reportFailure(token, error);
    }
  }

  /** Compare named groups against the selected seed document. */
  async submitGroups(specText: string): Promise<void> {
    const entries = parseGroupSpec(specText);
    if (entries.length === 0) {
      renderNotice(this.ui.notices, "error", "Describe at least one group, one per line.");
      return;
    }
    const seed = this.state.selected;
    if (!seed) {
      renderNotice(this.ui.notices, "error", "Query a document by id first to pick a seed.");
      return;
    }
    const emptyLabels = entries.filter((e) => e.members.length === 0).map((e) => e.label);
    const populated = entries.filter((e) => e.members.length > 0);
    if (populated.length === 0) {
      renderGroupPanels(this.ui.groupPanels, [], emptyLabels);
      return;
    }
    const groups = Object.fromEntries(populated.map((e) => [e.label, e.members]));
    const { token, signal } = this.beginRequest();
    try {
      const response = await this.client.groupSimilarity(seed, groups, signal);
      if (!this.state.acceptGroups(token, response)) {
        return;
      }
      clear(this.ui.notices);
      renderGroupPanels(this.ui.groupPanels, response.groups, emptyLabels);
    } catch (error) {
      this.reportFailure(token, error);
    }
  }

  /** One-shot reachability badge; failures are informational only. */
  async pingHealth(): Promise<void> {
    try {
      const health = await this.client.health();
      this.ui.health.textContent = `${health.status} · ${health.corpus_size} docs · ${health.vocab_size} terms`;
    } catch {
      this.ui.health.textContent = "service unreachable";
    }
  }

  /** Render a failure as an inline notice — results already on screen
   * stay put. Failures of superseded requests (including aborts) are
   * dropped silently. */
  private reportFailure(token: number, error: unknown): void {
    if (!this.state.isCurrent(token)) {
      return;
    }
    if (error instanceof ApiError) {
      renderNotice(this.ui.notices, "error", error.message);
    } else if (error instanceof DOMException && error.name === "AbortError") {
      return;
    } else {
      const message = error instanceof Error ? error.message : String(error);
      renderNotice(this.ui.notices, "error", `network error: ${message}`);
    }
  }
}

export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  return new App(root, options);
}

// Browser bootstrap: configuration is the service base URL only, taken
// from the `?api=` query parameter or a `window.LITSIM_BASE_URL` global.
declare global {
  interface Window {
    LITSIM_BASE_URL?: string;
  }
}

if (typeof document !== "undefined") {
  const mount = document.getElementById("app");
  if (mount) {
    const params = new URLSearchParams(window.location.search);
    const baseUrl = params.get("api") ?? window.LITSIM_BASE_URL ?? "";
    const app = createApp(mount, { baseUrl });
    void app.pingHealth();
  }
}
