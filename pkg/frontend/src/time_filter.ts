// Time-slider filtering: an element is visible iff its frame interval
// contains the cursor. Pure so it can be unit-tested exactly.

import type { GraphSnapshot } from "./types.js";

export interface VisibleSubset {
  nodeIds: Set<string>;
  edgeIds: Set<string>;
}

export function visibleAt(snapshot: GraphSnapshot, timeCursor: number): VisibleSubset {
  const nodeIds = new Set<string>();
  for (const node of snapshot.nodes) {
    if (node.first_frame <= timeCursor && timeCursor <= node.last_frame) {
      nodeIds.add(node.id);
    }
  }
  const edgeIds = new Set<string>();
  for (const edge of snapshot.edges) {
    if (edge.t_start <= timeCursor && timeCursor <= edge.t_end) {
      edgeIds.add(edge.id);
    }
  }
  return { nodeIds, edgeIds };
}

export function frameExtent(snapshot: GraphSnapshot): [number, number] {
  let lo = 0;
  let hi = 0;
  if (snapshot.nodes.length > 0) {
    lo = Math.min(...snapshot.nodes.map((n) => n.first_frame));
    hi = Math.max(...snapshot.nodes.map((n) => n.last_frame));
  }
  return [lo, hi];
}
