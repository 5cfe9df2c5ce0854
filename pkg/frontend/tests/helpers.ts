import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import type { FetchLike, HttpResponse } from "../src/api";

/** Committed service-response snapshot: HTTP status plus JSON body. */
export interface FixturePayload {
  status: number;
  body: unknown;
}

export function loadFixture(name: string): FixturePayload {
  const path = resolve(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as FixturePayload;
}

export function asResponse(fixture: FixturePayload): HttpResponse {
  return {
    ok: fixture.status >= 200 && fixture.status < 300,
    status: fixture.status,
    json: async () => fixture.body,
  };
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export type Responder = (call: RecordedCall) => FixturePayload | Promise<FixturePayload>;

/** Fetch stub that records each call and answers from `responder`. */
export function stubFetch(responder: Responder): { fetch: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetch: FetchLike = async (url, init) => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : null,
    };
    calls.push(call);
    return asResponse(await responder(call));
  };
  return { fetch, calls };
}

export interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (reason?: unknown) => void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** Let queued microtasks and zero-delay timers run. */
export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}
