import { vi } from "vitest";
import type { TranslationPayload } from "../src/types.js";

export function makePayload(overrides: Partial<TranslationPayload> = {}): TranslationPayload {
  return {
    source_text: "Is this water potable?",
    mt_text: "?Wota ia i gud blong dring?",
    post_edited_text: "?Wota ia i stret blong dring?",
    glossary_matches: [
      {
        entry: { id: 1, source_term: "potable", target_text: "stret blong dring" },
        matched_gram: ["potable"],
        input_span: [14, 21],
      },
    ],
    tm_matches: [
      {
        entry: {
          id: 1,
          source_text: "Is this water potable?",
          target_text: "?Wota ia i stret blong dring?",
          origin: "imported",
        },
        score: 2.5,
        rank: 1,
      },
    ],
    mt_diff_spans: [[11, 14]],
    ape_diff_spans: [[11, 16]],
    prompt_transcript: [
      { role: "system", content: "system prompt" },
      { role: "user", content: "user prompt" },
    ],
    timings_ms: { mt: 1, retrieval: 1, llm: 1, total: 3 },
    degraded: false,
    error_detail: null,
    reference: null,
    ...overrides,
  };
}

export interface FetchCall {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

/**
 * Install a scripted fetch: `routes` maps "METHOD path" (query string
 * stripped) to a response body or a function producing one. Returns the
 * recorded calls.
 */
export function stubFetch(
  routes: Record<string, unknown | ((call: FetchCall) => unknown)>,
): FetchCall[] {
  const calls: FetchCall[] = [];
  vi.stubGlobal("fetch", async (url: string, init: RequestInit = {}) => {
    const method = (init.method ?? "GET").toUpperCase();
    const path = url.split("?")[0];
    const call: FetchCall = {
      url,
      method,
      headers: (init.headers as Record<string, string>) ?? {},
      body: typeof init.body === "string" && init.body.startsWith("{")
        ? JSON.parse(init.body)
        : init.body,
    };
    calls.push(call);
    const key = `${method} ${path}`;
    if (!(key in routes)) {
      return new Response(JSON.stringify({ error: { code: "not_found", message: key } }),
        { status: 404 });
    }
    const spec = routes[key];
    const payload = typeof spec === "function" ? (spec as (c: FetchCall) => unknown)(call) : spec;
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  });
  return calls;
}

export function mountRoot(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
