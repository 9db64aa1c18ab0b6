// Payload shapes mirrored from the service API (docs/schemas.md in the backend repo).

export interface SessionSummary {
  session_id: string;
  video_id: string;
  keyframe_count: number;
  duration_s: number;
  call_budget: number;
}

export interface AskResult {
  answer: string;
  confidence: number;
  abstained: boolean;
  trace_ref: string;
}

export interface TraceStep {
  step_index: number;
  thought: string;
  action: { type: string; name?: string; args?: Record<string, unknown>; text?: string };
  observation: string;
  backend_calls: string[];
}

export interface AgentTrace {
  question: string;
  steps: TraceStep[];
  answer: string;
  confidence: number;
  fallback_used: boolean;
  abstained: boolean;
}

export interface GraphNode {
  id: string;
  category: string;
  first_frame: number;
  last_frame: number;
  attrs: Record<string, string>;
  provenance: [number, number[]][];
}

export interface GraphEdge {
  id: string;
  src: string;
  dst: string;
  relation: string;
  t_start: number;
  t_end: number;
  confidence: number;
  provenance: number[];
}

export interface GraphSnapshot {
  version: number;
  video_id: string;
  fps: number;
  vocabulary_version: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface SceneGraphResult {
  graph: GraphSnapshot;
  warnings: string[];
}

export interface QueryTrace {
  candidate_count: number;
  filter_steps: [string, number][];
  order_key: string;
  chosen_ids: string[];
}

export interface QueryResult {
  rows: Record<string, string>[];
  value: number | boolean | null;
  trace: QueryTrace;
}

export interface ApiErrorBody {
  error: {
    code: string;
    message: string;
    detail?: { offset?: number; expected?: string[] } | null;
  };
}
