"""ReAct loop with self-consistency confidence and retrieval-backed fallback.

One run: alternate model turns and tool invocations until the model emits a
final answer (or the step cap is hit), estimate confidence as the majority
fraction of k independently sampled answers, and if that stays below the
threshold run one fallback round (retrieval hits plus a graph summary injected
as extra context, then one re-estimate). Still unconvinced, the agent abstains
with an answer prefixed "uncertain: ".

Trace layout: model-driven steps in order, ending with a final_answer step
(synthesized when the step cap was hit); a system "fallback" step may follow
it. Every backend invocation is attributed to exactly one step's
``backend_calls`` window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..backends.protocol import BackendError, BudgetExceeded, ChatRequest, text_message
from ..graphquery.executor import graph_summary
from ..jsonutil import canonical_dumps
from ..media.buffer import buffer_context
from ..prompts import load_prompt, render_template
from ..retrieval.search import FusionConfig
from ..scenegraph.model import SceneGraph
from ..session import SessionContext
from .parsing import FinalAnswer, ToolCall, UnparsableAction, parse_action
from .tools import ToolSpec, default_registry, invoke_tool, render_tool_list

_ARTICLES = ("a ", "an ", "the ")
_TERMINAL_PUNCT = ".,!?;:"


@dataclass(frozen=True)
class AgentConfig:
    max_steps: int = 6
    k_samples: int = 3
    confidence_threshold: float = 0.5
    answer_max_tokens: int = 256
    step_max_tokens: int = 512
    context_budget_chars: int = 2000
    fallback_top_n: int = 3
    fallback_summary_edges: int = 5

    def __post_init__(self) -> None:
        if self.max_steps < 1 or self.k_samples < 1:
            raise ValueError("max_steps and k_samples must be >= 1")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError("confidence_threshold must be in [0, 1]")


@dataclass
class AgentStep:
    step_index: int
    thought: str
    action: dict  # {"type": "tool"|"final_answer"|"fallback"|"invalid", ...}
    observation: str
    backend_calls: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "step_index": self.step_index,
            "thought": self.thought,
            "action": self.action,
            "observation": self.observation,
            "backend_calls": list(self.backend_calls),
        }


@dataclass
class AgentTrace:
    question: str
    steps: list[AgentStep]
    answer: str
    confidence: float
    fallback_used: bool
    abstained: bool

    def to_doc(self) -> dict:
        return {
            "question": self.question,
            "steps": [s.to_doc() for s in self.steps],
            "answer": self.answer,
            "confidence": self.confidence,
            "fallback_used": self.fallback_used,
            "abstained": self.abstained,
        }

    def to_json_bytes(self) -> bytes:
        return canonical_dumps(self.to_doc()).encode("utf-8")


def normalize_answer(text: str) -> str:
    """Lowercase, trim, strip terminal punctuation, collapse whitespace, drop a leading article."""
    out = " ".join(text.lower().split())
    out = out.rstrip(_TERMINAL_PUNCT).strip()
    for article in _ARTICLES:
        if out.startswith(article):
            out = out[len(article):]
            break
    return out


def _render_steps(steps: list[AgentStep]) -> str:
    if not steps:
        return "(none)"
    lines = []
    for step in steps:
        lines.append(f"Thought: {step.thought}")
        action = step.action
        if action["type"] == "tool":
            lines.append(f"Action: {action['name']} {json.dumps(action['args'], sort_keys=True)}")
        elif action["type"] == "invalid":
            lines.append("Action: <unparsable>")
        else:
            lines.append(f"Final Answer: {action.get('text', '')}")
        if step.observation:
            lines.append(f"Observation: {step.observation}")
    return "\n".join(lines)


def build_react_request(
    session: SessionContext,
    cfg: AgentConfig,
    registry: dict[str, ToolSpec],
    question: str,
    context: str,
    steps: list[AgentStep],
) -> ChatRequest:
    system = render_template(
        load_prompt("react_system_v1"), tools=render_tool_list(registry)
    )
    user = render_template(
        load_prompt("react_user_v1"),
        context=context,
        question=question,
        steps=_render_steps(steps),
    )
    return ChatRequest(
        model_id=session.client.profile.model_id,
        messages=(text_message("system", system), text_message("user", user)),
        temperature=session.client.profile.temperature,
        max_tokens=cfg.step_max_tokens,
    )


def build_answer_request(
    session: SessionContext,
    cfg: AgentConfig,
    question: str,
    context: str,
    sample_index: int,
) -> ChatRequest:
    user = render_template(load_prompt("answer_v1"), context=context, question=question)
    return ChatRequest(
        model_id=session.client.profile.model_id,
        messages=(text_message("user", user),),
        temperature=session.client.profile.temperature,
        max_tokens=cfg.answer_max_tokens,
        sample_index=sample_index,
    )


def estimate_confidence(
    question: str,
    session: SessionContext,
    cfg: AgentConfig = AgentConfig(),
    extra_context: str | None = None,
) -> tuple[str, float]:
    """Majority fraction of k normalized sampled answers (ties: lowest sample index)."""
    context = buffer_context(session.buffer, session.transcript, cfg.context_budget_chars)
    if extra_context:
        context = f"{context}\n{extra_context}" if context else extra_context
    surfaces: list[str | None] = []
    for i in range(cfg.k_samples):
        req = build_answer_request(session, cfg, question, context, sample_index=i)
        try:
            surfaces.append(session.client.complete(req).text)
        except BudgetExceeded:
            raise
        except BackendError:
            surfaces.append(None)  # errored sample never matches anything
    counts: dict[str, int] = {}
    first_surface: dict[str, str] = {}
    first_index: dict[str, int] = {}
    for i, surface in enumerate(surfaces):
        if surface is None:
            continue
        key = normalize_answer(surface)
        counts[key] = counts.get(key, 0) + 1
        first_surface.setdefault(key, surface.strip())
        first_index.setdefault(key, i)
    if not counts:
        return "", 0.0
    best = min(counts, key=lambda k: (-counts[k], first_index[k]))
    return first_surface[best], counts[best] / cfg.k_samples


def _fallback_context(session: SessionContext, question: str, cfg: AgentConfig) -> str:
    lines = ["additional context:"]
    if session.retrieval_store is not None:
        hits = session.retrieval_store.search(
            question, FusionConfig(top_n=cfg.fallback_top_n), session.vocabulary
        )
        if hits:
            for hit in hits:
                text = session.retrieval_store.chunks[hit.chunk_id].text
                snippet = " ".join(text.split())[:160]
                lines.append(f"retrieved {hit.chunk_id} [{hit.channel}] score={hit.score:.3f}: {snippet}")
        else:
            lines.append("retrieved: none")
    else:
        lines.append("retrieved: none")
    graph = session.graph or SceneGraph(
        video_id=session.manifest.video_id, fps=session.manifest.fps
    )
    lines.append("graph: " + " | ".join(graph_summary(graph, cfg.fallback_summary_edges).split("\n")))
    return "\n".join(lines)


def run_agent(
    question: str,
    session: SessionContext,
    registry: dict[str, ToolSpec] | None = None,
    cfg: AgentConfig = AgentConfig(),
) -> AgentTrace:
    registry = registry if registry is not None else default_registry()
    client = session.client
    context = buffer_context(session.buffer, session.transcript, cfg.context_budget_chars)
    steps: list[AgentStep] = []

    for _ in range(cfg.max_steps):
        mark = len(client.call_log)
        req = build_react_request(session, cfg, registry, question, context, steps)
        resp = client.complete(req)
        try:
            thought, action = parse_action(resp.text)
        except UnparsableAction:
            steps.append(
                AgentStep(
                    step_index=len(steps),
                    thought="",
                    action={"type": "invalid", "raw": resp.text},
                    observation="ERROR: unparsable action",
                    backend_calls=client.call_log[mark:],
                )
            )
            continue
        if isinstance(action, FinalAnswer):
            answer, confidence = estimate_confidence(question, session, cfg)
            steps.append(
                AgentStep(
                    step_index=len(steps),
                    thought=thought,
                    action={"type": "final_answer", "text": action.text},
                    observation="",
                    backend_calls=client.call_log[mark:],
                )
            )
            break
        assert isinstance(action, ToolCall)
        observation = invoke_tool(registry, session, action.tool, action.args)
        steps.append(
            AgentStep(
                step_index=len(steps),
                thought=thought,
                action={"type": "tool", "name": action.tool, "args": action.args},
                observation=observation,
                backend_calls=client.call_log[mark:],
            )
        )
    else:
        # step cap reached without a final answer: answer from context, then
        # fall through to the same confidence gate
        mark = len(client.call_log)
        answer, confidence = estimate_confidence(question, session, cfg)
        steps.append(
            AgentStep(
                step_index=len(steps),
                thought="step limit reached; answering from gathered context",
                action={"type": "final_answer", "text": answer},
                observation="",
                backend_calls=client.call_log[mark:],
            )
        )

    fallback_used = False
    abstained = False
    if confidence < cfg.confidence_threshold:
        fallback_used = True
        mark = len(client.call_log)
        injected = _fallback_context(session, question, cfg)
        answer2, confidence2 = estimate_confidence(question, session, cfg, extra_context=injected)
        steps.append(
            AgentStep(
                step_index=len(steps),
                thought="confidence below threshold; retrieval-backed fallback",
                action={"type": "fallback"},
                observation=injected,
                backend_calls=client.call_log[mark:],
            )
        )
        if confidence2 < cfg.confidence_threshold:
            abstained = True
            answer = f"uncertain: {answer2}"
            confidence = confidence2
        else:
            answer, confidence = answer2, confidence2

    return AgentTrace(
        question=question,
        steps=steps,
        answer=answer,
        confidence=confidence,
        fallback_used=fallback_used,
        abstained=abstained,
    )
