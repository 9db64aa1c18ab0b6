"""Tool registry for the agent loop.

Tool errors raise ToolError; the loop turns them into "ERROR: ..." observations
so the model can re-plan instead of aborting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from ..backends.protocol import (
    BudgetExceeded,
    ChatMessage,
    ChatRequest,
    ImagePart,
    TextPart,
)
from ..graphquery.executor import PlanError, run_query
from ..graphquery.parser import QuerySyntaxError, parse_query
from ..jsonutil import canonical_dumps
from ..media.buffer import buffer_context
from ..media.transcript import transcript_search
from ..prompts import load_prompt, render_template
from ..retrieval.search import FusionConfig
from ..session import SessionContext

_NAME_RE = re.compile(r"^[a-z_]+$")


class ToolError(Exception):
    pass


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    arg_fields: tuple[tuple[str, str, bool], ...]  # (name, type, required)
    handler: Callable[[SessionContext, dict], str] | None = None

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise ValueError(f"tool name must match [a-z_]+, got {self.name!r}")


def _require_str(args: dict, key: str) -> str:
    value = args.get(key)
    if not isinstance(value, str) or not value:
        raise ToolError(f"argument {key!r} must be a non-empty string")
    return value


def _video_qa(session: SessionContext, args: dict) -> str:
    question = _require_str(args, "question")
    if not session.keyframes:
        raise ToolError("no keyframes available")
    index = args.get("keyframe_index", session.keyframes[-1].frame_index)
    if not isinstance(index, int) or not 0 <= index < session.manifest.frame_count:
        raise ToolError(f"keyframe_index out of range: {index!r}")
    prompt = render_template(
        load_prompt("video_qa_v1"),
        context=buffer_context(session.buffer, session.transcript),
        question=question,
    )
    frame_path = str(session.manifest.frame_paths[index])
    req = ChatRequest(
        model_id=session.client.profile.model_id,
        messages=(
            ChatMessage(
                role="user",
                parts=(TextPart(prompt), ImagePart(path=frame_path, frame_index=index)),
            ),
        ),
        temperature=session.client.profile.temperature,
    )
    return session.client.complete(req).text


def _transcript_search(session: SessionContext, args: dict) -> str:
    needle = _require_str(args, "needle")
    if session.transcript is None:
        return "no transcript available"
    matches = transcript_search(session.transcript, needle)
    if not matches:
        return "no matches"
    return "\n".join(
        f"[{u.t_start_s:.1f}–{u.t_end_s:.1f}]"
        + (f" ({u.speaker})" if u.speaker else "")
        + f" {u.text}"
        for u in matches
    )


def _graph_query(session: SessionContext, args: dict) -> str:
    if session.graph is None:
        raise ToolError("no scene graph generated yet")
    query = args.get("query")
    if not isinstance(query, str) or not query:
        question = args.get("question")
        if not isinstance(question, str) or not question:
            raise ToolError("provide 'query' text or a 'question' to translate")
        prompt = render_template(
            load_prompt("nl2query_v1"),
            categories=", ".join(session.vocabulary.ids),
            question=question,
        )
        from ..backends.protocol import text_message

        req = ChatRequest(
            model_id=session.client.profile.model_id,
            messages=(text_message("user", prompt),),
            temperature=session.client.profile.temperature,
            max_tokens=128,
        )
        query = session.client.complete(req).text.strip()
    try:
        result = run_query(query, session.graph, session.vocabulary)
    except QuerySyntaxError as exc:
        raise ToolError(f"query syntax: {exc}") from exc
    except PlanError as exc:
        raise ToolError(f"query plan: {exc}") from exc
    return f"query: {query}\nresult: {canonical_dumps(result.to_doc())}"


def _retrieve(session: SessionContext, args: dict) -> str:
    query = _require_str(args, "query")
    if session.retrieval_store is None:
        return "no reference corpus indexed"
    top_n = args.get("top_n", 3)
    if not isinstance(top_n, int) or top_n < 1:
        raise ToolError(f"top_n must be a positive integer, got {top_n!r}")
    cfg = FusionConfig(top_n=top_n)
    hits = session.retrieval_store.search(query, cfg, session.vocabulary)
    if not hits:
        return "no hits"
    lines = []
    for hit in hits:
        text = session.retrieval_store.chunks[hit.chunk_id].text
        snippet = " ".join(text.split())[:160]
        lines.append(f"{hit.chunk_id} [{hit.channel}] score={hit.score:.3f}: {snippet}")
    return "\n".join(lines)


def default_registry() -> dict[str, ToolSpec]:
    tools = [
        ToolSpec(
            name="video_qa",
            description="Ask the vision model about a keyframe (latest by default).",
            arg_fields=(("question", "string", True), ("keyframe_index", "int", False)),
            handler=_video_qa,
        ),
        ToolSpec(
            name="transcript_search",
            description="Case-insensitive substring search over the speech transcript.",
            arg_fields=(("needle", "string", True),),
            handler=_transcript_search,
        ),
        ToolSpec(
            name="graph_query",
            description=(
                "Run a graph query (MATCH/COUNT/EXISTS) over the scene graph; "
                "pass 'query' text, or 'question' to translate first."
            ),
            arg_fields=(("query", "string", False), ("question", "string", False)),
            handler=_graph_query,
        ),
        ToolSpec(
            name="retrieve",
            description="Dual-level retrieval over the reference corpus.",
            arg_fields=(("query", "string", True), ("top_n", "int", False)),
            handler=_retrieve,
        ),
        ToolSpec(
            name="final_answer",
            description="Finish with your answer: 'Final Answer: <text>'.",
            arg_fields=(),
            handler=None,
        ),
    ]
    return {tool.name: tool for tool in tools}


def render_tool_list(registry: dict[str, ToolSpec]) -> str:
    lines = []
    for name in sorted(registry):
        tool = registry[name]
        args = ", ".join(
            f"{arg}: {kind}" + ("" if required else "?")
            for arg, kind, required in tool.arg_fields
        )
        lines.append(f"- {name}({args}): {tool.description}")
    return "\n".join(lines)


def invoke_tool(
    registry: dict[str, ToolSpec], session: SessionContext, name: str, args: dict
) -> str:
    """Run a tool; ToolError text comes back as an ERROR observation."""
    tool = registry.get(name)
    if tool is None or tool.handler is None:
        return f"ERROR: unknown tool {name!r}"
    try:
        return tool.handler(session, args)
    except BudgetExceeded:
        raise
    except ToolError as exc:
        return f"ERROR: {exc}"
