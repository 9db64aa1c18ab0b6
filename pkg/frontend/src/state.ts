// Console session state: QA history is append-only and the graph snapshot
// version only moves forward.

import type { AskResult, GraphSnapshot, SessionSummary } from "./types.js";

export interface HistoryEntry {
  question: string;
  answer: string;
  confidence: number;
  abstained: boolean;
  trace_ref: string;
}

export class ConsoleSession {
  readonly summary: SessionSummary;
  private history: HistoryEntry[] = [];
  private snapshot: GraphSnapshot | null = null;
  private snapshotVersion = 0;
  askPending = false;

  constructor(summary: SessionSummary) {
    this.summary = summary;
  }

  get sessionId(): string {
    return this.summary.session_id;
  }

  get qaHistory(): readonly HistoryEntry[] {
    return this.history;
  }

  get graphSnapshot(): GraphSnapshot | null {
    return this.snapshot;
  }

  get graphVersion(): number {
    return this.snapshotVersion;
  }

  recordAnswer(question: string, result: AskResult): HistoryEntry {
    const entry: HistoryEntry = {
      question,
      answer: result.answer,
      confidence: result.confidence,
      abstained: result.abstained,
      trace_ref: result.trace_ref,
    };
    this.history = [...this.history, entry];
    return entry;
  }

  setGraph(snapshot: GraphSnapshot): void {
    this.snapshot = snapshot;
    this.snapshotVersion += 1;
  }
}
