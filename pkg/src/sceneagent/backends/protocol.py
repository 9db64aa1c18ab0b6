"""Chat wire protocol shared by every remote model role.

Every model (vision, canonicalization, judging) sits behind the same
chat-completion-style JSON POST. Requests are canonicalized to a stable JSON
form in which image parts are replaced by (path, content hash) pairs; the
SHA-256 of that form is the cache/fixture key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..jsonutil import canonical_dumps, sha256_hex

ROLES = ("system", "user", "assistant")
FINISH_REASONS = ("stop", "length", "error")


class BackendError(Exception):
    pass


class BackendTimeout(BackendError):
    """Retryable: the upstream did not answer in time."""


class TransientStatus(BackendError):
    """Retryable: upstream returned a 5xx status."""


class MalformedResponse(BackendError):
    pass


class FixtureMiss(BackendError):
    def __init__(self, digest: str, canonical: str):
        super().__init__(
            f"no fixture entry for digest {digest}; canonical request: {canonical}"
        )
        self.digest = digest
        self.canonical = canonical


class BudgetExceeded(BackendError):
    pass


RETRYABLE = (BackendTimeout, TransientStatus)


@dataclass(frozen=True)
class TextPart:
    text: str


@dataclass(frozen=True)
class ImagePart:
    path: str
    frame_index: int


ContentPart = TextPart | ImagePart


@dataclass(frozen=True)
class ChatMessage:
    role: str
    parts: tuple[ContentPart, ...]

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"bad role {self.role!r}")
        if not self.parts:
            raise ValueError("message needs at least one content part")


def text_message(role: str, text: str) -> ChatMessage:
    return ChatMessage(role=role, parts=(TextPart(text),))


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: int = 512
    sample_index: int = 0

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("request needs at least one message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range: {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        if self.sample_index < 0:
            raise ValueError("sample_index must be non-negative")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    finish_reason: str = "stop"
    usage: dict | None = None

    def __post_init__(self) -> None:
        if self.finish_reason not in FINISH_REASONS:
            raise ValueError(f"bad finish_reason {self.finish_reason!r}")
        if not self.text and self.finish_reason != "error":
            raise ValueError("empty text is only allowed with finish_reason=error")


@dataclass(frozen=True)
class BackendProfile:
    name: str
    kind: str  # "http" | "scripted"
    model_id: str
    base_url: str | None = None
    fixture_path: str | None = None
    timeout_ms: int = 30_000
    max_retries: int = 2
    temperature: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("http", "scripted"):
            raise ValueError(f"bad backend kind {self.kind!r}")
        if self.kind == "http" and not self.base_url:
            raise ValueError("http profiles require base_url")
        if self.kind == "scripted" and not self.fixture_path:
            raise ValueError("scripted profiles require fixture_path")
        if self.timeout_ms <= 0 or self.max_retries < 0:
            raise ValueError("timeout_ms must be positive and max_retries >= 0")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range: {self.temperature}")


def _wire_part(part: ContentPart) -> dict:
    if isinstance(part, TextPart):
        return {"type": "text", "text": part.text}
    return {"type": "image_ref", "path": part.path, "frame_index": part.frame_index}


def wire_body(profile: BackendProfile, req: ChatRequest) -> dict:
    return {
        "model": req.model_id,
        "messages": [
            {"role": m.role, "content": [_wire_part(p) for p in m.parts]}
            for m in req.messages
        ],
        "temperature": req.temperature,
        "max_tokens": req.max_tokens,
        "seed": profile.seed,
        "sample_index": req.sample_index,
    }


def _canonical_part(part: ContentPart) -> dict:
    if isinstance(part, TextPart):
        return {"type": "text", "text": part.text}
    content = Path(part.path).read_bytes()
    return {"type": "image_ref", "path": part.path, "content_sha256": sha256_hex(content)}


def canonical_request(profile: BackendProfile, req: ChatRequest) -> str:
    """Stable JSON form of the request; image parts become (path, content hash)."""
    body = wire_body(profile, req)
    for message, source in zip(body["messages"], req.messages):
        message["content"] = [_canonical_part(p) for p in source.parts]
    return canonical_dumps(body)


def request_digest(profile: BackendProfile, req: ChatRequest) -> str:
    return sha256_hex(canonical_request(profile, req))
