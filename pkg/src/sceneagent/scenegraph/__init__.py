from .build import merge_into_graph, temporal_relation
from .model import (
    SPATIAL_RELATIONS,
    TEMPORAL_RELATIONS,
    UNKNOWN_CATEGORY,
    Bbox,
    DetectedEntity,
    GraphError,
    SceneEdge,
    SceneGraph,
    SceneNode,
    UnknownFrameOrder,
)
from .serialize import export_graph, graph_from_doc, graph_to_doc, import_graph
from .spatial import (
    RelationCandidate,
    SpatialScorerConfig,
    infer_spatial_relations,
)
from .vocabulary import (
    CanonicalCategory,
    Vocabulary,
    canonicalize,
    load_vocabulary,
    load_vocabulary_file,
)

__all__ = [
    "Bbox",
    "CanonicalCategory",
    "DetectedEntity",
    "GraphError",
    "RelationCandidate",
    "SPATIAL_RELATIONS",
    "SceneEdge",
    "SceneGraph",
    "SceneNode",
    "SpatialScorerConfig",
    "TEMPORAL_RELATIONS",
    "UNKNOWN_CATEGORY",
    "UnknownFrameOrder",
    "Vocabulary",
    "canonicalize",
    "export_graph",
    "graph_from_doc",
    "graph_to_doc",
    "import_graph",
    "infer_spatial_relations",
    "load_vocabulary",
    "load_vocabulary_file",
    "merge_into_graph",
    "temporal_relation",
]
