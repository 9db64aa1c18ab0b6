"""Deterministic hashing embedder: FNV-1a token buckets, L2-normalized.

Retrieval stays testable without an embedding service; a served embedder can
be swapped in behind the same call shape.
"""

from __future__ import annotations

import math
import re

DEFAULT_DIM = 256

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_TOKEN_RE = re.compile(r"[a-z0-9]+")


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def embed_text(text: str, dim: int = DEFAULT_DIM) -> list[float]:
    """Term-frequency vector over FNV-1a buckets; unit norm (zero stays zero)."""
    vec = [0.0] * dim
    for token in tokenize(text):
        vec[fnv1a64(token.encode("utf-8")) % dim] += 1.0
    norm = math.sqrt(sum(v * v for v in vec))
    if norm == 0.0:
        return vec
    return [v / norm for v in vec]


def cosine(a: list[float], b: list[float]) -> float:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))
