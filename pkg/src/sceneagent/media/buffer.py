"""Temporal memory buffer: a sliding window of per-keyframe observations.

The buffer holds the most recent ``window`` observations and a merged view of
the entities they mention, keyed by canonical id, each with the [min, max]
keyframe interval over its occurrences in the surviving entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..scenegraph.model import DetectedEntity
from .manifest import MediaError
from .transcript import Transcript


class OutOfOrderObservation(MediaError):
    pass


@dataclass
class Observation:
    keyframe_index: int
    caption: str
    entities: list[DetectedEntity] = field(default_factory=list)
    relations: list[tuple[str, str, str]] = field(default_factory=list)
    timestamp_s: float = 0.0


def _entity_key(entity: DetectedEntity) -> str:
    return entity.category if entity.category is not None else entity.raw_label


@dataclass
class MemoryBuffer:
    window: int = 8
    entries: list[Observation] = field(default_factory=list)
    merged_entities: dict[str, tuple[int, int]] = field(default_factory=dict)

    def push(self, obs: Observation) -> "MemoryBuffer":
        if self.entries and obs.keyframe_index <= self.entries[-1].keyframe_index:
            raise OutOfOrderObservation(
                f"keyframe {obs.keyframe_index} after {self.entries[-1].keyframe_index}"
            )
        self.entries.append(obs)
        if len(self.entries) > self.window:
            del self.entries[0 : len(self.entries) - self.window]
        self._recompute_merged()
        return self

    def _recompute_merged(self) -> None:
        merged: dict[str, tuple[int, int]] = {}
        for entry in self.entries:
            for entity in entry.entities:
                key = _entity_key(entity)
                if key in merged:
                    lo, hi = merged[key]
                    merged[key] = (min(lo, entry.keyframe_index), max(hi, entry.keyframe_index))
                else:
                    merged[key] = (entry.keyframe_index, entry.keyframe_index)
        self.merged_entities = merged

    def time_span(self) -> tuple[float, float] | None:
        if not self.entries:
            return None
        return self.entries[0].timestamp_s, self.entries[-1].timestamp_s


def _entry_line(buf: MemoryBuffer, entry: Observation) -> str:
    keys = sorted({_entity_key(e) for e in entry.entities})
    if keys:
        rendered = ", ".join(
            f"{key}[{buf.merged_entities[key][0]},{buf.merged_entities[key][1]}]" for key in keys
        )
    else:
        rendered = "none"
    return f"[t={entry.timestamp_s:.1f}s] {entry.caption} | entities: {rendered}"


def buffer_context(
    buf: MemoryBuffer, transcript: Transcript | None = None, budget_chars: int = 2000
) -> str:
    """Render the buffer (oldest first) plus overlapping speech, within budget.

    When the rendering exceeds ``budget_chars`` whole lines are dropped oldest
    first until it fits; a single line that never fits is dropped too.
    """
    if budget_chars < 64:
        raise ValueError(f"budget_chars must be >= 64, got {budget_chars}")
    lines = [_entry_line(buf, entry) for entry in buf.entries]
    span = buf.time_span()
    if transcript is not None and span is not None:
        for utt in transcript.utterances:
            if utt.t_start_s <= span[1] and utt.t_end_s >= span[0]:
                lines.append(f"[speech {utt.t_start_s:.1f}–{utt.t_end_s:.1f}] {utt.text}")
    kept: list[str] = []
    used = 0
    for line in reversed(lines):
        cost = len(line) if not kept else len(line) + 1
        if used + cost > budget_chars:
            break
        kept.append(line)
        used += cost
    return "\n".join(reversed(kept))
