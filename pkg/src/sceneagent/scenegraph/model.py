"""Temporal scene graph data model: detections, nodes, labeled edges."""

from __future__ import annotations

from dataclasses import dataclass, field

Bbox = tuple[float, float, float, float]  # x, y, w, h in source-frame pixels

SPATIAL_RELATIONS = (
    "above",
    "below",
    "left_of",
    "right_of",
    "next_to",
    "inside",
    "contacts",
    "holds",
)

TEMPORAL_RELATIONS = ("before", "after", "during", "overlaps")

CATEGORY_KINDS = ("instrument", "anatomy", "person", "equipment", "other")

UNKNOWN_CATEGORY = "unknown_object"


class GraphError(Exception):
    pass


class UnknownFrameOrder(GraphError):
    """Observations must arrive with strictly increasing keyframe indices."""


@dataclass
class DetectedEntity:
    """One detection in one frame; ``category`` is set by canonicalization."""

    raw_label: str
    bbox: Bbox
    frame_index: int
    confidence: float = 1.0
    track_hint: str | None = None
    category: str | None = None


@dataclass
class SceneNode:
    node_id: str
    category: str
    first_frame: int
    last_frame: int
    attrs: dict[str, str] = field(default_factory=dict)
    provenance: list[tuple[int, Bbox]] = field(default_factory=list)


@dataclass
class SceneEdge:
    edge_id: str
    src: str
    dst: str
    relation: str
    t_start: int
    t_end: int
    confidence: float = 1.0
    provenance: list[int] = field(default_factory=list)


@dataclass
class SceneGraph:
    video_id: str
    fps: float
    nodes: dict[str, SceneNode] = field(default_factory=dict)
    edges: dict[str, SceneEdge] = field(default_factory=dict)
    vocabulary_version: str = "clinical_v1"

    def validate(self) -> None:
        """Assert structural invariants; raises GraphError on violation."""
        if self.fps <= 0:
            raise GraphError(f"fps must be positive, got {self.fps}")
        for node_id, node in self.nodes.items():
            if node.node_id != node_id:
                raise GraphError(f"node key {node_id!r} != id {node.node_id!r}")
            if node.first_frame > node.last_frame:
                raise GraphError(f"node {node_id}: empty interval")
            if not node.provenance:
                raise GraphError(f"node {node_id}: empty provenance")
        if self.nodes:
            span_lo = min(n.first_frame for n in self.nodes.values())
            span_hi = max(n.last_frame for n in self.nodes.values())
        for edge_id, edge in self.edges.items():
            if edge.edge_id != edge_id:
                raise GraphError(f"edge key {edge_id!r} != id {edge.edge_id!r}")
            if edge.src == edge.dst:
                raise GraphError(f"edge {edge_id}: src equals dst")
            if edge.src not in self.nodes or edge.dst not in self.nodes:
                raise GraphError(f"edge {edge_id}: dangling endpoint")
            if edge.relation not in SPATIAL_RELATIONS:
                raise GraphError(f"edge {edge_id}: unknown relation {edge.relation!r}")
            if edge.t_start > edge.t_end:
                raise GraphError(f"edge {edge_id}: empty interval")
            if edge.t_start < span_lo or edge.t_end > span_hi:
                raise GraphError(f"edge {edge_id}: interval outside node span")

    def last_observed_frame(self) -> int | None:
        if not self.nodes:
            return None
        return max(node.last_frame for node in self.nodes.values())
