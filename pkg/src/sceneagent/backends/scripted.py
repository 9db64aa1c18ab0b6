"""Deterministic scripted transport: responses come from a digest-keyed fixture table."""

from __future__ import annotations

import json
from pathlib import Path

from .protocol import (
    BackendProfile,
    ChatRequest,
    ChatResponse,
    FixtureMiss,
    canonical_request,
    request_digest,
)


def load_fixtures(path: str | Path) -> dict[str, dict]:
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: fixture file must be a JSON object")
    return doc


class ScriptedTransport:
    """Exact-match lookup keyed by the canonical request digest."""

    def __init__(self, fixtures: dict[str, dict] | None = None):
        self.fixtures: dict[str, dict] = dict(fixtures or {})

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedTransport":
        return cls(load_fixtures(path))

    def add(self, profile: BackendProfile, req: ChatRequest, text: str,
            finish_reason: str = "stop") -> str:
        """Register a response for a request; returns the digest (fixture key)."""
        digest = request_digest(profile, req)
        self.fixtures[digest] = {"text": text, "finish_reason": finish_reason}
        return digest

    def send(self, profile: BackendProfile, req: ChatRequest) -> ChatResponse:
        canonical = canonical_request(profile, req)
        digest = request_digest(profile, req)
        entry = self.fixtures.get(digest)
        if entry is None:
            raise FixtureMiss(digest, canonical)
        return ChatResponse(
            text=entry.get("text", ""),
            finish_reason=entry.get("finish_reason", "stop"),
            usage=entry.get("usage"),
        )
