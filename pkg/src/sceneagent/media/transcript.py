"""Speech transcripts as timed utterances, loaded from JSON files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .manifest import BadManifest


@dataclass(frozen=True)
class Utterance:
    t_start_s: float
    t_end_s: float
    speaker: str | None
    text: str


@dataclass(frozen=True)
class Transcript:
    utterances: tuple[Utterance, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for utt in self.utterances:
            if utt.t_start_s > utt.t_end_s:
                raise ValueError(f"utterance ends before it starts: {utt}")
        starts = [u.t_start_s for u in self.utterances]
        if starts != sorted(starts):
            raise ValueError("utterances must be sorted by t_start_s")


def load_transcript(path: str | Path) -> Transcript:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise BadManifest(f"{path}: cannot load transcript ({exc})") from exc
    entries = doc.get("utterances") if isinstance(doc, dict) else None
    if not isinstance(entries, list):
        raise BadManifest(f"{path}: transcript must contain an utterances list")
    utterances = []
    for entry in entries:
        try:
            utterances.append(
                Utterance(
                    t_start_s=float(entry["t_start_s"]),
                    t_end_s=float(entry["t_end_s"]),
                    speaker=entry.get("speaker"),
                    text=str(entry["text"]),
                )
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise BadManifest(f"{path}: bad utterance {entry!r} ({exc})") from exc
    utterances.sort(key=lambda u: u.t_start_s)
    return Transcript(utterances=tuple(utterances))


def transcript_search(transcript: Transcript, needle: str) -> list[Utterance]:
    """Case-insensitive substring match over utterance text, in time order."""
    lowered = needle.lower()
    return [u for u in transcript.utterances if lowered in u.text.lower()]
