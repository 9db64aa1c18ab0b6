"""Retrieval store: chunk texts plus both indices, with canonical JSON persistence."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..backends.client import CachingClient
from ..backends.embedding import DEFAULT_DIM, embed_text
from ..backends.protocol import BackendError, ChatRequest, text_message
from ..jsonutil import canonical_document
from ..scenegraph.vocabulary import Vocabulary, load_vocabulary
from .chunking import DocChunk, EmptyCorpus, EntityMatcher, build_chunks
from .search import FusionConfig, Hit, KGIndex, VectorIndex, fuse, high_level_retrieve, low_level_retrieve

STORE_SCHEMA_VERSION = 1


@dataclass
class RetrievalStore:
    vocabulary_version: str
    chunks: dict[str, DocChunk] = field(default_factory=dict)
    vector_index: VectorIndex = field(default_factory=lambda: VectorIndex(dim=DEFAULT_DIM))
    kg_index: KGIndex = field(default_factory=KGIndex)

    def search(
        self,
        query_text: str,
        cfg: FusionConfig = FusionConfig(),
        vocabulary: Vocabulary | None = None,
    ) -> list[Hit]:
        """Fused dual-level retrieval; query entities come from the same matcher."""
        vocab = vocabulary or load_vocabulary(self.vocabulary_version)
        matcher = EntityMatcher(vocab)
        query_entities = list(matcher.extract(query_text))
        low = low_level_retrieve(self.kg_index, query_entities)
        high = high_level_retrieve(self.vector_index, query_text, cfg.top_k_vector)
        return fuse(low, high, cfg)

    def to_doc(self) -> dict:
        return {
            "version": STORE_SCHEMA_VERSION,
            "vocabulary_version": self.vocabulary_version,
            "dim": self.vector_index.dim,
            "chunks": [
                {
                    "chunk_id": c.chunk_id,
                    "doc_id": c.doc_id,
                    "text": c.text,
                    "char_span": list(c.char_span),
                    "entities": list(c.entities),
                }
                for _, c in sorted(self.chunks.items())
            ],
            "vectors": {cid: vec for cid, vec in sorted(self.vector_index.entries.items())},
            "cooccurrence": [
                [a, b, count] for (a, b), count in sorted(self.kg_index.cooccurrence.items())
            ],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(canonical_document(self.to_doc()))

    @classmethod
    def load(cls, path: str | Path) -> "RetrievalStore":
        doc = json.loads(Path(path).read_text("utf-8"))
        if doc.get("version") != STORE_SCHEMA_VERSION:
            raise ValueError(f"unsupported index version {doc.get('version')!r}")
        store = cls(vocabulary_version=doc["vocabulary_version"])
        store.vector_index = VectorIndex(dim=doc["dim"])
        for entry in doc["chunks"]:
            chunk = DocChunk(
                chunk_id=entry["chunk_id"],
                doc_id=entry["doc_id"],
                text=entry["text"],
                char_span=tuple(entry["char_span"]),
                entities=tuple(entry["entities"]),
            )
            store.chunks[chunk.chunk_id] = chunk
            for entity in chunk.entities:
                store.kg_index.entity_chunks.setdefault(entity, set()).add(chunk.chunk_id)
        store.vector_index.entries = {cid: list(vec) for cid, vec in doc["vectors"].items()}
        store.kg_index.cooccurrence = {
            (a, b): count for a, b, count in doc["cooccurrence"]
        }
        return store


def _backend_entities(
    text: str, vocabulary: Vocabulary, client: CachingClient
) -> tuple[str, ...]:
    prompt = (
        "List the category ids from this closed list that the passage mentions, "
        "comma separated, or 'none'.\nCategories: "
        + ", ".join(vocabulary.ids)
        + "\n\nPassage:\n"
        + text
    )
    req = ChatRequest(
        model_id=client.profile.model_id,
        messages=(text_message("user", prompt),),
        temperature=client.profile.temperature,
        max_tokens=128,
    )
    try:
        answer = client.complete(req).text
    except BackendError:
        return ()
    found = {
        token.strip().lower()
        for token in answer.replace("\n", ",").split(",")
        if token.strip().lower() in vocabulary.categories
    }
    return tuple(sorted(found))


def ingest_corpus(
    docs: list[tuple[str, str]],
    chunk_size: int = 512,
    vocabulary: Vocabulary | None = None,
    client: CachingClient | None = None,
) -> RetrievalStore:
    """Chunk, extract entities (backend may only add), embed, and index a corpus."""
    if not docs:
        raise EmptyCorpus("no documents to ingest")
    vocab = vocabulary or load_vocabulary()
    matcher = EntityMatcher(vocab)
    store = RetrievalStore(vocabulary_version=vocab.version)
    for doc_id, text in docs:
        for chunk in build_chunks(doc_id, text, chunk_size, matcher):
            if client is not None:
                extra = _backend_entities(chunk.text, vocab, client)
                merged = tuple(sorted(set(chunk.entities) | set(extra)))
                chunk = DocChunk(
                    chunk_id=chunk.chunk_id,
                    doc_id=chunk.doc_id,
                    text=chunk.text,
                    char_span=chunk.char_span,
                    entities=merged,
                )
            store.chunks[chunk.chunk_id] = chunk
            store.kg_index.add_chunk(chunk.chunk_id, chunk.entities)
            store.vector_index.entries[chunk.chunk_id] = embed_text(
                chunk.text, store.vector_index.dim
            )
    if not store.chunks:
        raise EmptyCorpus("documents produced no chunks")
    return store


def load_corpus_manifest(path: str | Path) -> list[tuple[str, str]]:
    """Corpus manifest: JSON object mapping doc_id to a UTF-8 text file path."""
    path = Path(path)
    doc = json.loads(path.read_text("utf-8"))
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: corpus manifest must be a JSON object")
    docs = []
    for doc_id, rel in sorted(doc.items()):
        docs.append((doc_id, (path.parent / rel).read_text("utf-8")))
    return docs
