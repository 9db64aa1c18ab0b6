"""Dual-level retrieval: entity-graph channel, dense-vector channel, fusion."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..backends.embedding import cosine, embed_text

DIRECT_SCORE = 1.0
ONE_HOP_SCORE = 0.5


@dataclass(frozen=True)
class FusionConfig:
    vector_weight: float = 0.6
    graph_weight: float = 0.4
    top_k_vector: int = 5
    top_n: int = 3

    def __post_init__(self) -> None:
        if self.vector_weight < 0 or self.graph_weight < 0:
            raise ValueError("weights must be non-negative")
        if self.vector_weight + self.graph_weight <= 0:
            raise ValueError("at least one weight must be positive")
        if self.top_k_vector < 1 or self.top_n < 1:
            raise ValueError("top_k_vector and top_n must be positive")


@dataclass
class Hit:
    chunk_id: str
    score: float
    channel: str  # "vector" | "graph" | "both"
    matched_entities: list[str] = field(default_factory=list)


@dataclass
class VectorIndex:
    dim: int
    entries: dict[str, list[float]] = field(default_factory=dict)


@dataclass
class KGIndex:
    entity_chunks: dict[str, set[str]] = field(default_factory=dict)
    cooccurrence: dict[tuple[str, str], int] = field(default_factory=dict)

    def add_chunk(self, chunk_id: str, entities: tuple[str, ...]) -> None:
        for entity in entities:
            self.entity_chunks.setdefault(entity, set()).add(chunk_id)
        unique = sorted(set(entities))
        for i, first in enumerate(unique):
            for second in unique[i + 1 :]:
                key = (first, second)
                self.cooccurrence[key] = self.cooccurrence.get(key, 0) + 1

    def neighbors(self, entity: str) -> set[str]:
        out = set()
        for (a, b), count in self.cooccurrence.items():
            if count <= 0:
                continue
            if a == entity:
                out.add(b)
            elif b == entity:
                out.add(a)
        return out


def low_level_retrieve(kg: KGIndex, query_entities: list[str]) -> list[Hit]:
    """Direct chunks score 1.0; one-hop (via co-occurring entities) score 0.5."""
    scores: dict[str, float] = {}
    matched: dict[str, set[str]] = {}
    for entity in query_entities:
        for chunk_id in kg.entity_chunks.get(entity, ()):
            scores[chunk_id] = max(scores.get(chunk_id, 0.0), DIRECT_SCORE)
            matched.setdefault(chunk_id, set()).add(entity)
    for entity in query_entities:
        for neighbor in kg.neighbors(entity):
            for chunk_id in kg.entity_chunks.get(neighbor, ()):
                if scores.get(chunk_id, 0.0) >= DIRECT_SCORE:
                    continue
                scores[chunk_id] = max(scores.get(chunk_id, 0.0), ONE_HOP_SCORE)
                matched.setdefault(chunk_id, set()).add(neighbor)
    hits = [
        Hit(
            chunk_id=chunk_id,
            score=score,
            channel="graph",
            matched_entities=sorted(matched[chunk_id]),
        )
        for chunk_id, score in scores.items()
    ]
    hits.sort(key=lambda h: (-h.score, h.chunk_id))
    return hits


def high_level_retrieve(index: VectorIndex, query_text: str, k: int) -> list[Hit]:
    """Top-k by cosine similarity; zero-score and zero-vector queries yield nothing."""
    if k < 1:
        raise ValueError("k must be positive")
    query_vec = embed_text(query_text, index.dim)
    if not any(query_vec):
        return []
    scored = []
    for chunk_id, vec in index.entries.items():
        score = cosine(query_vec, vec)
        if score > 0.0:
            scored.append(Hit(chunk_id=chunk_id, score=score, channel="vector"))
    scored.sort(key=lambda h: (-h.score, h.chunk_id))
    return scored[:k]


def fuse(low: list[Hit], high: list[Hit], cfg: FusionConfig = FusionConfig()) -> list[Hit]:
    """Linear score fusion; ties broken by chunk_id ascending; returns top_n."""
    vector_scores = {h.chunk_id: h.score for h in high}
    graph_scores = {h.chunk_id: h.score for h in low}
    graph_matches = {h.chunk_id: h.matched_entities for h in low}
    fused: list[Hit] = []
    for chunk_id in set(vector_scores) | set(graph_scores):
        v = vector_scores.get(chunk_id)
        g = graph_scores.get(chunk_id)
        if v is not None and g is not None:
            channel = "both"
        elif v is not None:
            channel = "vector"
        else:
            channel = "graph"
        score = cfg.vector_weight * (v or 0.0) + cfg.graph_weight * (g or 0.0)
        fused.append(
            Hit(
                chunk_id=chunk_id,
                score=score,
                channel=channel,
                matched_entities=list(graph_matches.get(chunk_id, [])),
            )
        )
    fused.sort(key=lambda h: (-h.score, h.chunk_id))
    return fused[: cfg.top_n]
