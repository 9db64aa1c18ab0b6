from .chunking import DocChunk, EmptyCorpus, EntityMatcher, build_chunks, chunk_document
from .search import (
    DIRECT_SCORE,
    ONE_HOP_SCORE,
    FusionConfig,
    Hit,
    KGIndex,
    VectorIndex,
    fuse,
    high_level_retrieve,
    low_level_retrieve,
)
from .store import RetrievalStore, ingest_corpus, load_corpus_manifest

__all__ = [
    "DIRECT_SCORE",
    "DocChunk",
    "EmptyCorpus",
    "EntityMatcher",
    "FusionConfig",
    "Hit",
    "KGIndex",
    "ONE_HOP_SCORE",
    "RetrievalStore",
    "VectorIndex",
    "build_chunks",
    "chunk_document",
    "fuse",
    "high_level_retrieve",
    "ingest_corpus",
    "load_corpus_manifest",
    "low_level_retrieve",
]
