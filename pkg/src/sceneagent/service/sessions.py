"""Session registry behind the HTTP API: lifecycle, budgets, traces, persistence.

Persistence is canonical JSON under ``store_dir/sessions/<id>/``; loading
restores state byte-identically except for timestamps, which are excluded
from state identity.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..agent.loop import AgentConfig, AgentTrace, run_agent
from ..backends.client import CachingClient, CallBudget, Transport
from ..backends.protocol import (
    BackendError,
    BackendProfile,
    BudgetExceeded,
    ChatMessage,
    ChatRequest,
    ImagePart,
    TextPart,
)
from ..graphquery.executor import PlanError, ResultSet, run_query
from ..graphquery.parser import QuerySyntaxError
from ..jsonutil import canonical_document, canonical_dumps, sha256_hex
from ..media.buffer import MemoryBuffer, Observation, buffer_context
from ..media.manifest import MediaError, MediaManifest, load_manifest, manifest_from_doc
from ..media.pgm import MalformedFrame
from ..media.sampling import Keyframe, SamplerConfig, select_keyframes
from ..media.transcript import load_transcript
from ..prompts import load_prompt, render_template
from ..retrieval.store import RetrievalStore
from ..scenegraph.build import merge_into_graph
from ..scenegraph.model import DetectedEntity, GraphError, SceneGraph
from ..scenegraph.serialize import graph_from_doc, graph_to_doc
from ..scenegraph.vocabulary import Vocabulary, canonicalize, load_vocabulary
from ..session import SessionContext

DEFAULT_CALL_BUDGET = 200


class ServiceError(Exception):
    """Maps one-to-one onto the API error codes."""

    def __init__(self, code: str, message: str, detail: dict | None = None):
        assert code in ("not_found", "bad_request", "budget_exceeded", "backend_unavailable", "conflict")
        super().__init__(message)
        self.code = code
        self.detail = detail


@dataclass
class Session:
    session_id: str
    context: SessionContext
    budget: CallBudget
    created_at: float
    manifest_doc: dict
    base_dir: str
    traces: dict[str, dict] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    next_trace_seq: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


def _parse_extraction(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    for start in range(len(text)):
        if text[start] != "{":
            continue
        try:
            doc, _ = decoder.raw_decode(text[start:])
        except json.JSONDecodeError:
            continue
        if isinstance(doc, dict) and isinstance(doc.get("caption"), str):
            return doc
    return None


def _entities_from_doc(
    doc: dict,
    keyframe: Keyframe,
    frame_size: tuple[int, int],
    vocabulary: Vocabulary,
    warnings: list[str],
) -> tuple[list[DetectedEntity], list[tuple[str, str, str]]]:
    width, height = frame_size
    entities: list[DetectedEntity] = []
    for raw in doc.get("entities") or []:
        label = raw.get("label") if isinstance(raw, dict) else None
        bbox = raw.get("bbox") if isinstance(raw, dict) else None
        if (
            not isinstance(label, str)
            or not isinstance(bbox, list)
            or len(bbox) != 4
            or not all(isinstance(v, (int, float)) for v in bbox)
        ):
            warnings.append(f"keyframe {keyframe.frame_index}: dropped malformed entity {raw!r}")
            continue
        x, y, w, h = bbox
        if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > width or y + h > height:
            warnings.append(
                f"keyframe {keyframe.frame_index}: dropped out-of-bounds bbox {bbox!r}"
            )
            continue
        confidence = raw.get("confidence", 1.0)
        if not isinstance(confidence, (int, float)) or not 0 <= confidence <= 1:
            confidence = 1.0
        hint = raw.get("track_hint")
        entity = DetectedEntity(
            raw_label=label,
            bbox=(x, y, w, h),
            frame_index=keyframe.frame_index,
            confidence=float(confidence),
            track_hint=hint if isinstance(hint, str) and hint else None,
        )
        entity.category = canonicalize(label, vocabulary)
        entities.append(entity)
    relations: list[tuple[str, str, str]] = []
    for triple in doc.get("relations") or []:
        if (
            isinstance(triple, list)
            and len(triple) == 3
            and all(isinstance(x, str) for x in triple)
        ):
            relations.append((triple[0], triple[1], triple[2]))
        else:
            warnings.append(f"keyframe {keyframe.frame_index}: dropped malformed relation {triple!r}")
    return entities, relations


class SessionManager:
    def __init__(
        self,
        profile: BackendProfile,
        transport: Transport,
        store_dir: str | Path | None = None,
        call_budget: int = DEFAULT_CALL_BUDGET,
        sampler_cfg: SamplerConfig | None = None,
        agent_cfg: AgentConfig = AgentConfig(),
        corpus_store: RetrievalStore | None = None,
        vocabulary: Vocabulary | None = None,
    ):
        self.profile = profile
        self.transport = transport
        self.store_dir = Path(store_dir) if store_dir else None
        self.call_budget = call_budget
        self.sampler_cfg = sampler_cfg
        self.agent_cfg = agent_cfg
        self.corpus_store = corpus_store
        self.vocabulary = vocabulary or load_vocabulary()
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if self.store_dir is not None:
            self.load_all()

    # -- lifecycle -----------------------------------------------------------

    def _build_context(self, manifest: MediaManifest) -> SessionContext:
        budget = CallBudget(self.call_budget)
        client = CachingClient(self.profile, self.transport, budget=budget)
        cfg = self.sampler_cfg or SamplerConfig.for_fps(manifest.fps)
        context = SessionContext(
            manifest=manifest,
            client=client,
            keyframes=select_keyframes(manifest, cfg),
            buffer=MemoryBuffer(),
            transcript=(
                load_transcript(manifest.transcript_path)
                if manifest.transcript_path
                else None
            ),
            retrieval_store=self.corpus_store,
            vocabulary=self.vocabulary,
        )
        return context

    def create_session(
        self,
        manifest_path: str | None = None,
        manifest_doc: dict | None = None,
        base_dir: str | None = None,
    ) -> Session:
        try:
            if manifest_path:
                manifest = load_manifest(manifest_path)
                # store resolved paths so the persisted doc reloads from anywhere
                doc = manifest.to_doc()
                base = "."
            elif manifest_doc is not None:
                base = base_dir or "."
                manifest = manifest_from_doc(manifest_doc, base_dir=base)
                doc = dict(manifest_doc)
            else:
                raise ServiceError("bad_request", "provide manifest_path or manifest")
        except (MediaError, MalformedFrame) as exc:
            raise ServiceError("bad_request", f"manifest rejected: {exc}") from exc
        context = self._build_context(manifest)
        session = Session(
            session_id=uuid.uuid4().hex,
            context=context,
            budget=context.client.budget,
            created_at=time.time(),
            manifest_doc=doc,
            base_dir=base,
        )
        with self._lock:
            self.sessions[session.session_id] = session
        self._persist_session(session)
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError("not_found", f"no session {session_id!r}")
        return session

    # -- workflows -----------------------------------------------------------

    def ask(self, session_id: str, question: str) -> tuple[Session, AgentTrace, str]:
        session = self.get(session_id)
        with session.lock:
            if session.budget.remaining <= 0:
                raise ServiceError("budget_exceeded", "session call budget exhausted")
            try:
                trace = run_agent(question, session.context, cfg=self.agent_cfg)
            except BudgetExceeded as exc:
                raise ServiceError("budget_exceeded", str(exc)) from exc
            except BackendError as exc:
                raise ServiceError("backend_unavailable", str(exc)) from exc
            trace_ref = f"{session.session_id}.{session.next_trace_seq}"
            session.next_trace_seq += 1
            session.traces[trace_ref] = trace.to_doc()
            self._persist_session(session)
            return session, trace, trace_ref

    def generate_scene_graph(self, session_id: str) -> tuple[SceneGraph, list[str]]:
        """Extract entities per keyframe and rebuild buffer plus graph from scratch."""
        session = self.get(session_id)
        with session.lock:
            context = session.context
            warnings: list[str] = []
            buffer = MemoryBuffer()
            graph = SceneGraph(
                video_id=context.manifest.video_id,
                fps=context.manifest.fps,
                vocabulary_version=context.vocabulary.version,
            )
            try:
                for keyframe in context.keyframes:
                    doc = self._extract_keyframe(context, buffer, keyframe)
                    if doc is None:
                        warnings.append(
                            f"keyframe {keyframe.frame_index}: unparsable extraction, skipped"
                        )
                        continue
                    frame_size = context.manifest.frame_sizes[keyframe.frame_index]
                    entities, relations = _entities_from_doc(
                        doc, keyframe, frame_size, context.vocabulary, warnings
                    )
                    obs = Observation(
                        keyframe_index=keyframe.frame_index,
                        caption=doc.get("caption", ""),
                        entities=entities,
                        relations=relations,
                        timestamp_s=keyframe.timestamp_s,
                    )
                    buffer.push(obs)
                    merge_into_graph(
                        graph,
                        [obs],
                        context.vocabulary,
                        frame_sizes=[frame_size],
                    )
            except BudgetExceeded as exc:
                raise ServiceError("budget_exceeded", str(exc)) from exc
            except BackendError as exc:
                raise ServiceError("backend_unavailable", str(exc)) from exc
            context.buffer = buffer
            context.graph = graph
            session.warnings = warnings
            self._persist_session(session)
            return graph, warnings

    def _extract_keyframe(
        self, context: SessionContext, buffer: MemoryBuffer, keyframe: Keyframe
    ) -> dict | None:
        rendered_context = buffer_context(buffer, context.transcript)
        frame_path = str(context.manifest.frame_paths[keyframe.frame_index])
        for template in ("extraction_v1", "extraction_strict_v1"):
            prompt = render_template(load_prompt(template), context=rendered_context)
            req = ChatRequest(
                model_id=context.client.profile.model_id,
                messages=(
                    ChatMessage(
                        role="user",
                        parts=(
                            TextPart(prompt),
                            ImagePart(path=frame_path, frame_index=keyframe.frame_index),
                        ),
                    ),
                ),
                temperature=context.client.profile.temperature,
                max_tokens=1024,
            )
            doc = _parse_extraction(context.client.complete(req).text)
            if doc is not None:
                return doc
        return None

    def graph_query(self, session_id: str, query: str) -> ResultSet:
        session = self.get(session_id)
        if session.context.graph is None:
            raise ServiceError("conflict", "no scene graph generated yet; run scenegraph first")
        try:
            return run_query(query, session.context.graph, session.context.vocabulary)
        except QuerySyntaxError as exc:
            raise ServiceError(
                "bad_request",
                str(exc),
                detail={"offset": exc.offset, "expected": sorted(exc.expected)},
            ) from exc
        except PlanError as exc:
            raise ServiceError("bad_request", str(exc)) from exc

    def get_graph_doc(self, session_id: str) -> dict:
        session = self.get(session_id)
        if session.context.graph is None:
            raise ServiceError("conflict", "no scene graph generated yet; run scenegraph first")
        return graph_to_doc(session.context.graph)

    def get_trace(self, trace_ref: str) -> dict:
        session_id = trace_ref.split(".", 1)[0]
        session = self.sessions.get(session_id)
        if session is None or trace_ref not in session.traces:
            raise ServiceError("not_found", f"no trace {trace_ref!r}")
        return session.traces[trace_ref]

    # -- state identity ------------------------------------------------------

    def state_digest(self, session_id: str) -> str:
        """Hash of session state; timestamps are excluded from identity."""
        session = self.get(session_id)
        return sha256_hex(canonical_dumps(self._session_doc(session)))

    # -- persistence ---------------------------------------------------------

    def _session_doc(self, session: Session) -> dict:
        context = session.context
        return {
            "session_id": session.session_id,
            "video_id": context.manifest.video_id,
            "manifest": session.manifest_doc,
            "base_dir": session.base_dir,
            "budget_limit": session.budget.limit,
            "budget_spent": session.budget.spent,
            "next_trace_seq": session.next_trace_seq,
            "warnings": list(session.warnings),
            "keyframes": [
                {
                    "frame_index": k.frame_index,
                    "timestamp_s": k.timestamp_s,
                    "motion_score": k.motion_score,
                    "scene_boundary": k.scene_boundary,
                }
                for k in context.keyframes
            ],
            "buffer": {
                "window": context.buffer.window,
                "entries": [
                    {
                        "keyframe_index": o.keyframe_index,
                        "caption": o.caption,
                        "timestamp_s": o.timestamp_s,
                        "entities": [
                            {
                                "raw_label": e.raw_label,
                                "bbox": list(e.bbox),
                                "frame_index": e.frame_index,
                                "confidence": e.confidence,
                                "track_hint": e.track_hint,
                                "category": e.category,
                            }
                            for e in o.entities
                        ],
                        "relations": [list(r) for r in o.relations],
                    }
                    for o in context.buffer.entries
                ],
            },
            "graph": graph_to_doc(context.graph) if context.graph is not None else None,
            "traces": session.traces,
        }

    def _persist_session(self, session: Session) -> None:
        if self.store_dir is None:
            return
        root = self.store_dir / "sessions" / session.session_id
        root.mkdir(parents=True, exist_ok=True)
        doc = self._session_doc(session)
        graph_doc = doc.pop("graph")
        traces = doc.pop("traces")
        doc["created_at"] = session.created_at
        (root / "session.json").write_bytes(canonical_document(doc))
        if graph_doc is not None:
            (root / "graph.json").write_bytes(canonical_document(graph_doc))
        traces_dir = root / "traces"
        traces_dir.mkdir(exist_ok=True)
        for ref, trace_doc in traces.items():
            (traces_dir / f"{ref}.json").write_bytes(canonical_document(trace_doc))

    def persist_all(self) -> None:
        for session in list(self.sessions.values()):
            self._persist_session(session)

    def load_all(self) -> None:
        sessions_dir = self.store_dir / "sessions"
        if not sessions_dir.is_dir():
            return
        for session_dir in sorted(sessions_dir.iterdir()):
            if not session_dir.is_dir():
                continue
            self._load_session(session_dir)

    def _load_session(self, session_dir: Path) -> None:
        session_file = session_dir / "session.json"
        try:
            doc = json.loads(session_file.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ServiceError("bad_request", f"cannot load {session_file}: {exc}") from exc
        try:
            manifest = manifest_from_doc(doc["manifest"], base_dir=doc.get("base_dir", "."))
        except (MediaError, MalformedFrame, KeyError) as exc:
            raise ServiceError("bad_request", f"cannot load {session_file}: {exc}") from exc
        budget = CallBudget(doc.get("budget_limit", self.call_budget))
        budget.spent = min(doc.get("budget_spent", 0), budget.limit)
        client = CachingClient(self.profile, self.transport, budget=budget)
        context = SessionContext(
            manifest=manifest,
            client=client,
            keyframes=[
                Keyframe(
                    frame_index=k["frame_index"],
                    timestamp_s=k["timestamp_s"],
                    motion_score=k["motion_score"],
                    scene_boundary=k["scene_boundary"],
                )
                for k in doc.get("keyframes", [])
            ],
            buffer=self._buffer_from_doc(doc.get("buffer") or {}),
            transcript=(
                load_transcript(manifest.transcript_path) if manifest.transcript_path else None
            ),
            retrieval_store=self.corpus_store,
            vocabulary=self.vocabulary,
        )
        graph_file = session_dir / "graph.json"
        if graph_file.is_file():
            try:
                context.graph = graph_from_doc(json.loads(graph_file.read_text("utf-8")))
            except (json.JSONDecodeError, GraphError) as exc:
                raise ServiceError("bad_request", f"cannot load {graph_file}: {exc}") from exc
        session = Session(
            session_id=doc["session_id"],
            context=context,
            budget=budget,
            created_at=doc.get("created_at", 0.0),
            manifest_doc=doc["manifest"],
            base_dir=doc.get("base_dir", "."),
            warnings=list(doc.get("warnings", [])),
            next_trace_seq=doc.get("next_trace_seq", 0),
        )
        traces_dir = session_dir / "traces"
        if traces_dir.is_dir():
            for trace_file in sorted(traces_dir.glob("*.json")):
                try:
                    session.traces[trace_file.stem] = json.loads(trace_file.read_text("utf-8"))
                except (OSError, json.JSONDecodeError) as exc:
                    raise ServiceError(
                        "bad_request", f"cannot load {trace_file}: {exc}"
                    ) from exc
        self.sessions[session.session_id] = session

    def _buffer_from_doc(self, doc: dict) -> MemoryBuffer:
        buffer = MemoryBuffer(window=doc.get("window", 8))
        for entry in doc.get("entries", []):
            entities = []
            for e in entry.get("entities", []):
                entity = DetectedEntity(
                    raw_label=e["raw_label"],
                    bbox=tuple(e["bbox"]),
                    frame_index=e["frame_index"],
                    confidence=e.get("confidence", 1.0),
                    track_hint=e.get("track_hint"),
                    category=e.get("category"),
                )
                entities.append(entity)
            buffer.push(
                Observation(
                    keyframe_index=entry["keyframe_index"],
                    caption=entry.get("caption", ""),
                    entities=entities,
                    relations=[tuple(r) for r in entry.get("relations", [])],
                    timestamp_s=entry.get("timestamp_s", 0.0),
                )
            )
        return buffer
