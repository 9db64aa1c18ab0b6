import { vi } from "vitest";

import type { AgentTrace, GraphSnapshot, QueryResult } from "../src/types.js";

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function stubFetch(handler: (url: string, init?: RequestInit) => Response | Promise<Response>) {
  const mock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) =>
    handler(String(input), init),
  );
  vi.stubGlobal("fetch", mock);
  return mock;
}

export const FIXTURE_GRAPH: GraphSnapshot = {
  version: 1,
  video_id: "fixture",
  fps: 2.0,
  vocabulary_version: "clinical_v1",
  nodes: [
    {
      id: "forceps:#0", category: "forceps", first_frame: 10, last_frame: 90,
      attrs: {}, provenance: [[10, [2, 2, 4, 4]]],
    },
    {
      id: "scalpel:#0", category: "scalpel", first_frame: 0, last_frame: 50,
      attrs: {}, provenance: [[0, [1, 1, 4, 4]]],
    },
    {
      id: "tissue_region:#0", category: "tissue_region", first_frame: 0, last_frame: 90,
      attrs: {}, provenance: [[0, [8, 8, 6, 6]]],
    },
  ],
  edges: [
    {
      id: "e1", src: "scalpel:#0", dst: "tissue_region:#0", relation: "contacts",
      t_start: 40, t_end: 46, confidence: 1.0, provenance: [40, 46],
    },
    {
      id: "e2", src: "forceps:#0", dst: "tissue_region:#0", relation: "contacts",
      t_start: 70, t_end: 80, confidence: 1.0, provenance: [70, 80],
    },
  ],
};

export const LATEST_CONTACT_RESULT: QueryResult = {
  rows: [{ a: "forceps:#0" }],
  value: null,
  trace: {
    candidate_count: 2,
    filter_steps: [
      ["src:instrument", 2],
      ["rel:contacts", 2],
      ["dst:tissue_region", 2],
    ],
    order_key: "t_end desc, edge_id asc",
    chosen_ids: ["e2"],
  },
};

export const FIXTURE_TRACE: AgentTrace = {
  question: "what did the nurse ask for?",
  steps: [
    {
      step_index: 0,
      thought: "check speech",
      action: { type: "tool", name: "transcript_search", args: { needle: "clamp" } },
      observation: "[0.0-1.0] (nurse) Hand me the clamp",
      backend_calls: ["d1"],
    },
    {
      step_index: 1,
      thought: "found it",
      action: { type: "final_answer", text: "the clamp" },
      observation: "",
      backend_calls: ["d2", "d3", "d4", "d5"],
    },
  ],
  answer: "the clamp",
  confidence: 1.0,
  fallback_used: false,
  abstained: false,
};
