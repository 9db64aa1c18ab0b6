"""Merging per-keyframe observations into a temporal scene graph.

Node identity across frames: ``(category, track_hint)`` when a hint is
present, otherwise ``(category, ordinal)`` where ordinals number the unhinted
entities of one category in first-seen order within each observation. An edge
triple observed at consecutive merged keyframes extends its interval; after a
gap the same triple starts a new edge, so one triple may recur as disjoint
intervals.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from ..media.buffer import Observation

from .model import (
    SPATIAL_RELATIONS,
    DetectedEntity,
    SceneEdge,
    SceneGraph,
    SceneNode,
    UnknownFrameOrder,
)
from .spatial import RelationCandidate, SpatialScorerConfig, infer_spatial_relations
from .vocabulary import Vocabulary

_EDGE_ID_RE = re.compile(r"^e(\d+)$")


def temporal_relation(e1: SceneEdge, e2: SceneEdge) -> str:
    """Rule-derived ordering of two edge intervals; exactly one label applies."""
    if e1.t_end < e2.t_start:
        return "before"
    if e2.t_end < e1.t_start:
        return "after"
    if e2.t_start <= e1.t_start and e1.t_end <= e2.t_end:
        return "during"
    return "overlaps"


def _next_edge_number(graph: SceneGraph) -> int:
    highest = -1
    for edge_id in graph.edges:
        match = _EDGE_ID_RE.match(edge_id)
        if match:
            highest = max(highest, int(match.group(1)))
    return highest + 1


def _node_id_for(entity: DetectedEntity, ordinal: int) -> str:
    if entity.track_hint:
        return f"{entity.category}:{entity.track_hint}"
    return f"{entity.category}:#{ordinal}"


def _resolve_nodes(
    graph: SceneGraph, obs: Observation
) -> list[str]:
    """Create or extend one node per entity; returns node ids aligned to entities."""
    ordinals: dict[str, int] = {}
    node_ids: list[str] = []
    for entity in obs.entities:
        if entity.category is None:
            raise ValueError(f"entity {entity.raw_label!r} is not canonicalized")
        if entity.track_hint:
            node_id = _node_id_for(entity, 0)
        else:
            ordinal = ordinals.get(entity.category, 0)
            ordinals[entity.category] = ordinal + 1
            node_id = _node_id_for(entity, ordinal)
        node = graph.nodes.get(node_id)
        if node is None:
            node = SceneNode(
                node_id=node_id,
                category=entity.category,
                first_frame=obs.keyframe_index,
                last_frame=obs.keyframe_index,
                attrs={"track_hint": entity.track_hint} if entity.track_hint else {},
                provenance=[],
            )
            graph.nodes[node_id] = node
        node.first_frame = min(node.first_frame, obs.keyframe_index)
        node.last_frame = max(node.last_frame, obs.keyframe_index)
        node.provenance.append((obs.keyframe_index, tuple(entity.bbox)))
        node_ids.append(node_id)
    return node_ids


def _triple_candidates(
    obs: Observation, vocabulary: Vocabulary
) -> list[RelationCandidate]:
    """Resolve raw (src_label, relation, dst_label) triples to entity indices."""
    from .vocabulary import canonicalize

    out: list[RelationCandidate] = []
    for src_label, relation, dst_label in obs.relations:
        if relation not in SPATIAL_RELATIONS:
            continue
        src_cat = canonicalize(src_label, vocabulary)
        dst_cat = canonicalize(dst_label, vocabulary)
        src_idx = next(
            (i for i, e in enumerate(obs.entities) if e.category == src_cat), None
        )
        dst_idx = next(
            (i for i, e in enumerate(obs.entities) if e.category == dst_cat), None
        )
        if src_idx is None or dst_idx is None or src_idx == dst_idx:
            continue
        out.append(RelationCandidate(src=src_idx, dst=dst_idx, relation=relation, confidence=1.0))
    return out


def merge_into_graph(
    graph: SceneGraph,
    observations: Iterable[Observation],
    vocabulary: Vocabulary,
    frame_sizes: Sequence[tuple[int, int]] | None = None,
    scorer_cfg: SpatialScorerConfig = SpatialScorerConfig(),
    infer_relations: bool = True,
) -> SceneGraph:
    """Merge observations (strictly increasing keyframe indices) into the graph.

    ``frame_sizes`` maps each observation's position to its frame (w, h) for
    the geometric scorer; when omitted, dims are taken from entity bboxes.
    """
    prev_index = graph.last_observed_frame()
    edge_counter = _next_edge_number(graph)
    for pos, obs in enumerate(observations):
        if prev_index is not None and obs.keyframe_index <= prev_index:
            raise UnknownFrameOrder(
                f"observation at keyframe {obs.keyframe_index} after {prev_index}"
            )
        node_ids = _resolve_nodes(graph, obs)
        candidates: list[RelationCandidate] = []
        if infer_relations and obs.entities:
            if frame_sizes is not None:
                width, height = frame_sizes[pos]
            else:
                width = max(1, round(max(e.bbox[0] + e.bbox[2] for e in obs.entities)))
                height = max(1, round(max(e.bbox[1] + e.bbox[3] for e in obs.entities)))
            candidates.extend(
                infer_spatial_relations(obs.entities, width, height, vocabulary, scorer_cfg)
            )
        candidates.extend(_triple_candidates(obs, vocabulary))
        # dedup to (src node, dst node, relation), keep max confidence, then
        # order deterministically so entity permutations yield identical ids
        merged: dict[tuple[str, str, str], float] = {}
        for cand in candidates:
            src_id, dst_id = node_ids[cand.src], node_ids[cand.dst]
            if src_id == dst_id:
                continue
            key = (src_id, dst_id, cand.relation)
            merged[key] = max(merged.get(key, 0.0), cand.confidence)
        for (src_id, dst_id, relation), confidence in sorted(merged.items()):
            existing = [
                e
                for e in graph.edges.values()
                if e.src == src_id
                and e.dst == dst_id
                and e.relation == relation
                and prev_index is not None
                and e.t_end >= prev_index
            ]
            if existing:
                edge = max(existing, key=lambda e: e.t_end)
                edge.t_end = obs.keyframe_index
                edge.confidence = max(edge.confidence, confidence)
                edge.provenance.append(obs.keyframe_index)
            else:
                edge_id = f"e{edge_counter:04d}"
                edge_counter += 1
                graph.edges[edge_id] = SceneEdge(
                    edge_id=edge_id,
                    src=src_id,
                    dst=dst_id,
                    relation=relation,
                    t_start=obs.keyframe_index,
                    t_end=obs.keyframe_index,
                    confidence=confidence,
                    provenance=[obs.keyframe_index],
                )
        prev_index = obs.keyframe_index
    return graph
