/** Shared helpers: load fixture bytes captured from a live service run
 * and a scripted fetch double for driving the controller offline. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/client.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

export function fixtureJson(name: string): unknown {
  return JSON.parse(fixtureText(name));
}

export interface Exchange {
  method: string;
  path: string;
  status: number;
  body: string;
  /** Resolves the response only when released; used to hold a move
   * in flight while testing the single-mutation rule. */
  gate?: Promise<void>;
}

export interface RecordedCall {
  method: string;
  path: string;
}

/** A fetch that replays a fixed script of exchanges in order, failing
 * loudly on any request the script did not anticipate. */
export function scriptedFetch(script: Exchange[]): { fetch: FetchLike; calls: RecordedCall[] } {
  const queue = [...script];
  const calls: RecordedCall[] = [];
  const fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    calls.push({ method, path });
    const next = queue.shift();
    if (!next) {
      throw new Error(`unexpected request ${method} ${path}`);
    }
    if (next.method !== method || next.path !== path) {
      throw new Error(
        `expected ${next.method} ${next.path}, controller sent ${method} ${path}`,
      );
    }
    if (next.gate) {
      await next.gate;
    }
    return new Response(next.body, {
      status: next.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetch, calls };
}

export function ok(method: string, path: string, body: string): Exchange {
  return { method, path, status: 200, body };
}
