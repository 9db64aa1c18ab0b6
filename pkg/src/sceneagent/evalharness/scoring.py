"""Answer scoring: direct letter match for MCQ, judge backend for open answers."""

from __future__ import annotations

import json
import re

from ..backends.client import CachingClient
from ..backends.protocol import BackendError, ChatRequest, text_message
from ..prompts import PROMPT_VERSIONS, load_prompt, render_template

_LETTER_RE = re.compile(r"(?<![A-Z0-9])([A-D])(?![A-Z0-9])")

JUDGE_PROMPT_VERSION = PROMPT_VERSIONS["judge"]


def extract_option_letter(predicted: str) -> str | None:
    """First standalone option letter in forms like "B", "B.", "(B)", "Answer: B"."""
    text = predicted.strip().upper()
    text = re.sub(r"^ANSWER\s*:\s*", "", text)
    match = _LETTER_RE.search(text)
    return match.group(1) if match else None


def score_mcq(predicted: str, gold: str) -> tuple[bool, str | None]:
    """Returns (correct, extracted letter); letter None means no letter found."""
    if len(gold) != 1 or not gold.isalpha():
        raise ValueError(f"gold must be a single letter, got {gold!r}")
    letter = extract_option_letter(predicted)
    if letter is None:
        return False, None
    return letter == gold.upper(), letter


def _parse_judge_json(text: str) -> tuple[bool, str] | None:
    decoder = json.JSONDecoder()
    for start in range(len(text)):
        if text[start] != "{":
            continue
        try:
            doc, _ = decoder.raw_decode(text[start:])
        except json.JSONDecodeError:
            continue
        if isinstance(doc, dict) and isinstance(doc.get("equivalent"), bool):
            return doc["equivalent"], str(doc.get("justification", ""))
    return None


def judge_open(
    question: str,
    predicted: str,
    gold: str,
    client: CachingClient,
) -> tuple[bool, str]:
    """Ask the judge whether predicted and gold are semantically equivalent.

    A non-conforming reply is retried once with a stricter re-ask, then scored
    false with justification "judge_unparsable"; backend failures score false
    with "judge_error".
    """
    for template in ("judge_v1", "judge_strict_v1"):
        prompt = render_template(
            load_prompt(template), question=question, gold=gold, predicted=predicted
        )
        req = ChatRequest(
            model_id=client.profile.model_id,
            messages=(text_message("user", prompt),),
            temperature=client.profile.temperature,
            max_tokens=256,
        )
        try:
            text = client.complete(req).text
        except BackendError:
            return False, "judge_error"
        parsed = _parse_judge_json(text)
        if parsed is not None:
            return parsed
    return False, "judge_unparsable"
