"""Corpus chunking and deterministic entity extraction.

Documents split on blank lines; consecutive paragraphs are packed greedily
into chunks whose text (a contiguous substring of the source) stays within
the chunk size. Oversize paragraphs are hard-split at the chunk size.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..scenegraph.vocabulary import Vocabulary


class EmptyCorpus(Exception):
    pass


@dataclass(frozen=True)
class DocChunk:
    chunk_id: str
    doc_id: str
    text: str
    char_span: tuple[int, int]
    entities: tuple[str, ...]


def _paragraph_spans(text: str) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    pos = 0
    start: int | None = None
    end_of_last_content = 0
    for line in text.splitlines(keepends=True):
        content = line.rstrip("\r\n")
        if content.strip():
            if start is None:
                start = pos
            end_of_last_content = pos + len(content)
        elif start is not None:
            spans.append((start, end_of_last_content))
            start = None
        pos += len(line)
    if start is not None:
        spans.append((start, end_of_last_content))
    return spans


def chunk_document(doc_id: str, text: str, chunk_size: int) -> list[tuple[int, int]]:
    """Pack paragraph spans into chunk spans no longer than chunk_size."""
    if chunk_size < 128:
        raise ValueError(f"chunk_size must be >= 128, got {chunk_size}")
    chunks: list[tuple[int, int]] = []
    current: tuple[int, int] | None = None
    for span in _paragraph_spans(text):
        start, end = span
        if end - start > chunk_size:
            if current is not None:
                chunks.append(current)
                current = None
            for piece_start in range(start, end, chunk_size):
                chunks.append((piece_start, min(end, piece_start + chunk_size)))
            continue
        if current is None:
            current = span
        elif end - current[0] <= chunk_size:
            current = (current[0], end)
        else:
            chunks.append(current)
            current = span
    if current is not None:
        chunks.append(current)
    return chunks


class EntityMatcher:
    """Word-boundary, case-insensitive matching of vocabulary ids and synonyms."""

    def __init__(self, vocabulary: Vocabulary):
        self._patterns: list[tuple[re.Pattern, str]] = []
        for cat in vocabulary.categories.values():
            surfaces = {cat.id, *cat.synonyms}
            for surface in surfaces:
                pattern = re.compile(rf"\b{re.escape(surface)}\b", re.IGNORECASE)
                self._patterns.append((pattern, cat.id))

    def extract(self, text: str) -> tuple[str, ...]:
        found = {cat_id for pattern, cat_id in self._patterns if pattern.search(text)}
        return tuple(sorted(found))


def build_chunks(
    doc_id: str, text: str, chunk_size: int, matcher: EntityMatcher
) -> list[DocChunk]:
    chunks = []
    for ordinal, (start, end) in enumerate(chunk_document(doc_id, text, chunk_size)):
        chunk_text = text[start:end]
        chunks.append(
            DocChunk(
                chunk_id=f"{doc_id}:{ordinal}",
                doc_id=doc_id,
                text=chunk_text,
                char_span=(start, end),
                entities=matcher.extract(chunk_text),
            )
        )
    return chunks
