"""Shared per-video working state handed to the agent, tools, and service."""

from __future__ import annotations

from dataclasses import dataclass, field

from .backends.client import CachingClient
from .media.buffer import MemoryBuffer
from .media.manifest import MediaManifest
from .media.sampling import Keyframe
from .media.transcript import Transcript
from .retrieval.store import RetrievalStore
from .scenegraph.model import SceneGraph
from .scenegraph.vocabulary import Vocabulary, load_vocabulary


@dataclass
class SessionContext:
    manifest: MediaManifest
    client: CachingClient
    keyframes: list[Keyframe] = field(default_factory=list)
    buffer: MemoryBuffer = field(default_factory=MemoryBuffer)
    transcript: Transcript | None = None
    graph: SceneGraph | None = None
    retrieval_store: RetrievalStore | None = None
    vocabulary: Vocabulary = field(default_factory=load_vocabulary)
