/** Typed client for the similarity service HTTP API.
 *
 * Every number the UI displays comes straight out of these response
 * payloads; the client never post-processes scores or fractions.
 */

export interface ResultRow {
  doc_id: string;
  title: string | null;
  year: number | null;
  score: number;
}

export interface ImportantWord {
  term: string;
  weight: number;
}

export interface QueryResponse {
  results: ResultRow[];
  unknown_excludes: string[];
  timing_ms: number;
  important_words?: ImportantWord[] | null;
}

export interface GroupResult {
  label: string;
  median_similarity: number;
  more_similar_fraction: number;
  unknown_ids: string[];
}

export interface GroupResponse {
  doc_id: string;
  groups: GroupResult[];
  timing_ms: number;
}

export interface HealthResponse {
  status: string;
  corpus_size: number;
  vocab_size: number;
}

/** The subset of the Fetch API the client relies on; lets tests stub
 * responses with plain objects instead of real Response instances. */
export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<HttpResponse>;

/** Service-reported failure: HTTP status plus the payload's explanation. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

/** Flatten a FastAPI `detail` field (string, or a list of validation
 * error objects) into one human-readable line. */
function detailText(payload: unknown, status: number): string {
  if (payload !== null && typeof payload === "object" && "detail" in payload) {
    const detail = (payload as { detail: unknown }).detail;
    if (typeof detail === "string") {
      return detail;
    }
    if (Array.isArray(detail)) {
      const parts = detail.map((entry) =>
        entry !== null && typeof entry === "object" && typeof (entry as { msg?: unknown }).msg === "string"
          ? (entry as { msg: string }).msg
          : JSON.stringify(entry),
      );
      if (parts.length > 0) {
        return parts.join("; ");
      }
    }
    if (detail !== undefined) {
      return JSON.stringify(detail);
    }
  }
  return `request failed with status ${status}`;
}

export interface SimilarOptions {
  k?: number;
  exclude?: string[];
  importantWords?: boolean;
  signal?: AbortSignal;
}

export class ApiClient {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // Bind the global fetch lazily so constructing a client in a
    // fetch-less environment (jsdom) only fails if it is actually used.
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, detailText(payload, response.status));
    }
    return payload;
  }

  private post(path: string, body: unknown, signal?: AbortSignal): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  }

  similarById(docId: string, options: SimilarOptions = {}): Promise<QueryResponse> {
    return this.post(
      "/api/similar",
      {
        doc_id: docId,
        k: options.k ?? 30,
        exclude: options.exclude ?? [],
        important_words: options.importantWords ?? false,
      },
      options.signal,
    ) as Promise<QueryResponse>;
  }

  similarByText(text: string, options: SimilarOptions = {}): Promise<QueryResponse> {
    return this.post(
      "/api/similar",
      {
        text,
        k: options.k ?? 30,
        exclude: options.exclude ?? [],
        important_words: options.importantWords ?? false,
      },
      options.signal,
    ) as Promise<QueryResponse>;
  }

  groupSimilarity(
    docId: string,
    groups: Record<string, string[]>,
    signal?: AbortSignal,
  ): Promise<GroupResponse> {
    return this.post("/api/group-similarity", { doc_id: docId, groups }, signal) as Promise<GroupResponse>;
  }

  health(signal?: AbortSignal): Promise<HealthResponse> {
    return this.request("/api/health", { method: "GET", signal }) as Promise<HealthResponse>;
  }
}
