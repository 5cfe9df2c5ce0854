/** View state for the single-page frontend.
 *
 * The invariants the rest of the app leans on:
 *   - only the last successful response is ever rendered; responses from
 *     superseded submissions are discarded via monotonically increasing
 *     tickets,
 *   - at most one submission is considered "current" at a time — a newer
 *     `begin()` invalidates every outstanding ticket,
 *   - the breadcrumb trail grows only when a result row is clicked
 *     (a fresh form submission starts a new trail).
 */

import type { GroupResponse, QueryResponse } from "./api";

export type QueryMode = "by-id" | "free-text";

export interface QuerySubmission {
  mode: QueryMode;
  value: string;
}

/** Breadcrumb label for a submission: the doc id, or a quoted snippet. */
export function submissionLabel(submission: QuerySubmission): string {
  if (submission.mode === "by-id") {
    return submission.value;
  }
  const text = submission.value.trim();
  const snippet = text.length > 40 ? `${text.slice(0, 37)}...` : text;
  return `“${snippet}”`;
}

export class ViewState {
  mode: QueryMode = "by-id";
  /** Last successful ranked-results response; the only one rendered. */
  response: QueryResponse | null = null;
  /** Doc id of the selected seed (queried or clicked); group queries need it. */
  selected: string | null = null;
  /** Last successful group comparison for the current seed. */
  groupResponse: GroupResponse | null = null;
  breadcrumb: string[] = [];

  private ticket = 0;

  /** Register a new submission; the returned token is the only one that
   * may commit a response until `begin()` is called again. */
  begin(): number {
    this.ticket += 1;
    return this.ticket;
  }

  isCurrent(token: number): boolean {
    return token === this.ticket;
  }

  /** Commit a ranked-results response unless a newer submission has
   * started. Returns whether the commit happened. */
  acceptResponse(
    token: number,
    submission: QuerySubmission,
    response: QueryResponse,
    options: { extendTrail?: boolean } = {},
  ): boolean {
    if (!this.isCurrent(token)) {
      return false;
    }
    this.mode = submission.mode;
    this.response = response;
    this.selected = submission.mode === "by-id" ? submission.value : null;
    // Group panels describe the previous seed; a new seed invalidates them.
    this.groupResponse = null;
    const label = submissionLabel(submission);
    if (options.extendTrail && this.breadcrumb.length > 0) {
      this.breadcrumb = [...this.breadcrumb, label];
    } else {
      this.breadcrumb = [label];
    }
    return true;
  }

  /** Commit a group comparison unless superseded. */
  acceptGroups(token: number, response: GroupResponse): boolean {
    if (!this.isCurrent(token)) {
      return false;
    }
    this.groupResponse = response;
    return true;
  }
}
