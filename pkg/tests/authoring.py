"""Helpers for authoring scripted-backend fixtures in tests.

Two mechanisms, both built on the external contracts:
- miss-driven: run an operation, read the missing digest out of the
  FixtureMiss error, attach the next scripted reply, retry;
- request replay: build the exact request the code under test will issue
  (prompt builders are public) and register the reply up front.
"""

from __future__ import annotations

import re

from sceneagent.agent import build_answer_request, build_react_request, default_registry
from sceneagent.backends import BackendProfile, FixtureMiss, ScriptedTransport
from sceneagent.media import buffer_context
from sceneagent.service import ServiceError, SessionManager

DIGEST_RE = re.compile(r"digest ([0-9a-f]{64})")

SCRIPTED_PROFILE = BackendProfile(
    name="scripted", kind="scripted", model_id="scripted-default", fixture_path="inline"
)


def probe_manager(**kwargs) -> tuple[SessionManager, ScriptedTransport]:
    transport = ScriptedTransport()
    manager = SessionManager(profile=SCRIPTED_PROFILE, transport=transport, **kwargs)
    return manager, transport


def drive_manager(action, transport: ScriptedTransport, replies, max_rounds: int = 80):
    """Retry an operation, registering queued replies for each fixture miss."""
    queue = list(replies)
    for _ in range(max_rounds):
        try:
            return action()
        except ServiceError as exc:
            cause = exc.__cause__
            if not isinstance(cause, FixtureMiss) or not queue:
                raise
            transport.fixtures[cause.digest] = {"text": queue.pop(0), "finish_reason": "stop"}
        except FixtureMiss as exc:
            if not queue:
                raise
            transport.fixtures[exc.digest] = {"text": queue.pop(0), "finish_reason": "stop"}
    raise AssertionError("fixture authoring did not converge")


def author_ask(manager: SessionManager, transport: ScriptedTransport, sid: str,
               question: str, react_reply: str, sample_replies) -> None:
    """Register the exact requests one clean agent run will issue."""
    cfg = manager.agent_cfg
    ctx = manager.get(sid).context
    context = buffer_context(ctx.buffer, ctx.transcript, cfg.context_budget_chars)
    transport.add(
        manager.profile,
        build_react_request(ctx, cfg, default_registry(), question, context, []),
        react_reply,
    )
    for i, reply in enumerate(sample_replies):
        transport.add(
            manager.profile,
            build_answer_request(ctx, cfg, question, context, sample_index=i),
            reply,
        )


def author_video_fixtures(
    manifest_path,
    scenegraph_replies=None,
    asks=None,
) -> dict:
    """Build a fixture table for a CLI-style one-shot run over one video.

    ``asks`` is a list of (question, react_reply, sample_replies) applied to a
    fresh session (empty buffer), matching how the CLI evaluates questions.
    """
    manager, transport = probe_manager()
    sid = manager.create_session(manifest_path=str(manifest_path)).session_id
    if scenegraph_replies is not None:
        drive_manager(
            lambda: manager.generate_scene_graph(sid), transport, scenegraph_replies
        )
    for question, react_reply, sample_replies in asks or []:
        author_ask(manager, transport, sid, question, react_reply, sample_replies)
    return dict(transport.fixtures)
