/** Sequential fetch mock: each test declares the exact exchange it expects. */

import { expect, vi } from "vitest";

export interface Exchange {
  method: string;
  path: string;
  status: number;
  body: unknown;
  request?: unknown;
}

export interface FetchQueue {
  remaining(): number;
  calls(): string[];
}

export function installFetchQueue(queue: Exchange[]): FetchQueue {
  const pending = [...queue];
  const seen: string[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
      const method = init?.method ?? "GET";
      const path = String(input).replace(/^https?:\/\/[^/]+/, "");
      seen.push(`${method} ${path}`);
      const next = pending.shift();
      if (!next) {
        throw new Error(`unexpected request: ${method} ${path}`);
      }
      expect(`${method} ${path}`).toBe(`${next.method} ${next.path}`);
      if (next.request !== undefined && next.request !== null) {
        expect(JSON.parse(String(init?.body))).toEqual(next.request);
      }
      return new Response(JSON.stringify(next.body), {
        status: next.status,
        headers: { "Content-Type": "application/json" },
      });
    }),
  );
  return {
    remaining: () => pending.length,
    calls: () => [...seen],
  };
}

export function mount(): HTMLElement {
  const root = document.createElement("div");
  root.id = "app";
  document.body.replaceChildren(root);
  return root;
}

export function text(root: HTMLElement, selector: string): string {
  const node = root.querySelector(selector);
  expect(node, `missing element ${selector}`).not.toBeNull();
  return (node as HTMLElement).textContent ?? "";
}
