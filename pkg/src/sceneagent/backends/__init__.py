from .client import BACKOFF_BASE_S, CachingClient, CallBudget
from .embedding import DEFAULT_DIM, cosine, embed_text, fnv1a64, tokenize
from .http import HttpTransport
from .protocol import (
    BackendError,
    BackendProfile,
    BackendTimeout,
    BudgetExceeded,
    ChatMessage,
    ChatRequest,
    ChatResponse,
    FixtureMiss,
    ImagePart,
    MalformedResponse,
    TextPart,
    TransientStatus,
    canonical_request,
    request_digest,
    text_message,
    wire_body,
)
from .scripted import ScriptedTransport, load_fixtures

__all__ = [
    "BACKOFF_BASE_S",
    "BackendError",
    "BackendProfile",
    "BackendTimeout",
    "BudgetExceeded",
    "CachingClient",
    "CallBudget",
    "ChatMessage",
    "ChatRequest",
    "ChatResponse",
    "DEFAULT_DIM",
    "FixtureMiss",
    "HttpTransport",
    "ImagePart",
    "MalformedResponse",
    "ScriptedTransport",
    "TextPart",
    "TransientStatus",
    "canonical_request",
    "cosine",
    "embed_text",
    "fnv1a64",
    "load_fixtures",
    "request_digest",
    "text_message",
    "tokenize",
    "wire_body",
]
