"""Running QA items through the agent pipeline and scoring the answers."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..agent.loop import AgentConfig, run_agent
from ..backends.client import CachingClient
from ..backends.protocol import BackendError
from ..session import SessionContext
from .items import QAItem, render_mcq_question
from .report import RunRecord
from .scoring import judge_open, score_mcq


@dataclass
class EvalOutcome:
    records: list[RunRecord]
    errors: list[str]  # item_id: message for items that failed to evaluate


def evaluate_items(
    items: list[QAItem],
    session_factory: Callable[[str], SessionContext],
    judge_client: CachingClient | None = None,
    agent_cfg: AgentConfig = AgentConfig(),
) -> EvalOutcome:
    """Evaluate items grouped by video; one session per video_id."""
    sessions: dict[str, SessionContext] = {}
    records: list[RunRecord] = []
    errors: list[str] = []
    for item in items:
        try:
            session = sessions.get(item.video_id)
            if session is None:
                session = session_factory(item.video_id)
                sessions[item.video_id] = session
            question = render_mcq_question(item)
            started = time.monotonic()
            trace = run_agent(question, session, cfg=agent_cfg)
            latency_ms = (time.monotonic() - started) * 1000.0
            record = RunRecord(
                item_id=item.item_id,
                predicted=trace.answer,
                correct=False,
                confidence=trace.confidence,
                abstained=trace.abstained,
                latency_ms=latency_ms,
            )
            if trace.abstained:
                record.correct = False
            elif item.kind == "mcq":
                correct, letter = score_mcq(trace.answer, item.gold)
                record.correct = correct
                if letter is None:
                    record.flags.append("no_letter_found")
            else:
                if judge_client is None:
                    raise BackendError("open items need a judge backend")
                equivalent, justification = judge_open(
                    item.question, trace.answer, item.gold, judge_client
                )
                record.correct = equivalent
                record.judge_justification = justification
            records.append(record)
        except BackendError as exc:
            errors.append(f"{item.item_id}: {exc}")
    return EvalOutcome(records=records, errors=errors)
