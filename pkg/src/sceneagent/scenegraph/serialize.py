"""Canonical JSON export/import of scene graphs (export then import is identity)."""

from __future__ import annotations

import json

from ..jsonutil import canonical_document
from .model import GraphError, SceneEdge, SceneGraph, SceneNode

SCHEMA_VERSION = 1


def graph_to_doc(graph: SceneGraph) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "video_id": graph.video_id,
        "fps": graph.fps,
        "vocabulary_version": graph.vocabulary_version,
        "nodes": [
            {
                "id": node.node_id,
                "category": node.category,
                "first_frame": node.first_frame,
                "last_frame": node.last_frame,
                "attrs": node.attrs,
                "provenance": [[frame, list(bbox)] for frame, bbox in node.provenance],
            }
            for _, node in sorted(graph.nodes.items())
        ],
        "edges": [
            {
                "id": edge.edge_id,
                "src": edge.src,
                "dst": edge.dst,
                "relation": edge.relation,
                "t_start": edge.t_start,
                "t_end": edge.t_end,
                "confidence": edge.confidence,
                "provenance": list(edge.provenance),
            }
            for _, edge in sorted(graph.edges.items())
        ],
    }


def export_graph(graph: SceneGraph) -> bytes:
    """Canonical form: sorted keys, nodes/edges sorted by id, trailing newline."""
    graph.validate()
    return canonical_document(graph_to_doc(graph))


def graph_from_doc(doc: dict) -> SceneGraph:
    if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
        raise GraphError(f"unsupported graph document version: {doc.get('version')!r}")
    try:
        graph = SceneGraph(
            video_id=doc["video_id"],
            fps=float(doc["fps"]),
            vocabulary_version=doc["vocabulary_version"],
        )
        for n in doc["nodes"]:
            graph.nodes[n["id"]] = SceneNode(
                node_id=n["id"],
                category=n["category"],
                first_frame=n["first_frame"],
                last_frame=n["last_frame"],
                attrs=dict(n["attrs"]),
                provenance=[(frame, tuple(bbox)) for frame, bbox in n["provenance"]],
            )
        for e in doc["edges"]:
            graph.edges[e["id"]] = SceneEdge(
                edge_id=e["id"],
                src=e["src"],
                dst=e["dst"],
                relation=e["relation"],
                t_start=e["t_start"],
                t_end=e["t_end"],
                confidence=e["confidence"],
                provenance=list(e["provenance"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    graph.validate()
    return graph


def import_graph(data: bytes | str) -> SceneGraph:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph document is not valid JSON: {exc}") from exc
    return graph_from_doc(doc)
