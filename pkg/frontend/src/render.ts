/** DOM rendering for the frontend.
 *
 * Renderers copy numbers straight off the API payload: the exact value is
 * stored in a `data-*` attribute and the display text is a fixed-decimal
 * formatting of that same value. No similarity number is computed here —
 * the only local arithmetic is bar geometry (widths as a fraction of the
 * chart's own maximum).
 */

import type { GroupResult, ImportantWord, QueryResponse, ResultRow } from "./api";

export function clear(element: Element): void {
  element.replaceChildren();
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export type NoticeKind = "error" | "info";

/** Inline, non-blocking notice; previously rendered results stay up. */
export function renderNotice(host: Element, kind: NoticeKind, message: string): void {
  clear(host);
  const notice = el("div", `notice notice-${kind}`, message);
  notice.setAttribute("role", kind === "error" ? "alert" : "status");
  host.appendChild(notice);
}

export function renderBreadcrumb(host: Element, trail: readonly string[]): void {
  clear(host);
  trail.forEach((label, i) => {
    if (i > 0) {
      host.appendChild(el("span", "crumb-sep", " › "));
    }
    const crumb = el("span", i === trail.length - 1 ? "crumb crumb-current" : "crumb", label);
    host.appendChild(crumb);
  });
}

function fillBar(track: HTMLElement, fraction: number): void {
  const bar = el("div", "bar-fill");
  const width = Math.max(0, Math.min(1, fraction)) * 100;
  bar.style.width = `${width.toFixed(2)}%`;
  track.appendChild(bar);
}

/** Ranked result list. Rows are rendered in payload order — the service
 * already sorts by score — with the score shown to three decimals. */
export function renderResults(
  host: Element,
  response: QueryResponse,
  onPick: (docId: string) => void,
): void {
  clear(host);
  if (response.results.length === 0) {
    host.appendChild(el("p", "placeholder", "No matches."));
    return;
  }
  const list = el("ol", "result-list");
  for (const row of response.results) {
    list.appendChild(resultRow(row, onPick));
  }
  host.appendChild(list);
  if (response.unknown_excludes.length > 0) {
    host.appendChild(
      el("p", "excludes-note", `Ignored unknown excludes: ${response.unknown_excludes.join(", ")}`),
    );
  }
}

function resultRow(row: ResultRow, onPick: (docId: string) => void): HTMLLIElement {
  const item = el("li", "result-row");
  item.dataset.docId = row.doc_id;
  item.dataset.score = String(row.score);

  const pick = el("button", "result-pick", row.title ?? row.doc_id);
  pick.type = "button";
  pick.title = `Query with ${row.doc_id} as seed`;
  pick.addEventListener("click", () => onPick(row.doc_id));
  item.appendChild(pick);

  item.appendChild(el("span", "result-year", row.year === null ? "—" : String(row.year)));
  item.appendChild(el("span", "result-score", row.score.toFixed(3)));
  return item;
}

/** Horizontal bar chart of important-word weights, widest bar = chart max. */
export function renderImportantWords(host: Element, words: readonly ImportantWord[]): void {
  clear(host);
  if (words.length === 0) {
    host.appendChild(el("p", "placeholder", "No important words for this query."));
    return;
  }
  const max = words.reduce((m, w) => Math.max(m, w.weight), 0);
  const chart = el("div", "word-chart");
  for (const word of words) {
    const entry = el("div", "word-bar");
    entry.dataset.term = word.term;
    entry.dataset.weight = String(word.weight);
    entry.appendChild(el("span", "word-term", word.term));
    const track = el("div", "bar-track");
    fillBar(track, max > 0 ? word.weight / max : 0);
    entry.appendChild(track);
    entry.appendChild(el("span", "word-weight", word.weight.toFixed(4)));
    chart.appendChild(entry);
  }
  host.appendChild(chart);
}

/** One comparison panel per group: median-similarity bar (full track =
 * similarity 1.0) and the corpus more-similar percentage. */
export function renderGroupPanels(
  host: Element,
  groups: readonly GroupResult[],
  emptyLabels: readonly string[] = [],
): void {
  clear(host);
  if (groups.length === 0 && emptyLabels.length === 0) {
    return;
  }
  const container = el("div", "group-panels");
  for (const group of groups) {
    container.appendChild(groupPanel(group));
  }
  for (const label of emptyLabels) {
    container.appendChild(emptyGroupPanel(label));
  }
  host.appendChild(container);
}

function groupPanel(group: GroupResult): HTMLElement {
  const panel = el("section", "group-panel");
  panel.dataset.label = group.label;
  panel.dataset.median = String(group.median_similarity);
  panel.dataset.fraction = String(group.more_similar_fraction);

  panel.appendChild(el("h3", "group-label", group.label));

  const track = el("div", "bar-track");
  fillBar(track, group.median_similarity);
  panel.appendChild(track);

  panel.appendChild(el("span", "group-median", `median ${group.median_similarity.toFixed(3)}`));
  panel.appendChild(
    el(
      "span",
      "group-fraction",
      `${(group.more_similar_fraction * 100).toFixed(1)}% of corpus more similar`,
    ),
  );
  if (group.unknown_ids.length > 0) {
    panel.appendChild(el("p", "group-unknown", `Unresolved ids: ${group.unknown_ids.join(", ")}`));
  }
  return panel;
}

function emptyGroupPanel(label: string): HTMLElement {
  const panel = el("section", "group-panel group-panel-empty");
  panel.dataset.label = label;
  panel.appendChild(el("h3", "group-label", label));
  panel.appendChild(el("p", "group-empty", "no resolvable members"));
  return panel;
}
