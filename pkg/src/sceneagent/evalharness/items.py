"""QA item loading and validation (JSON-lines, one item per line)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class EvalError(Exception):
    pass


class SchemaError(EvalError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateId(EvalError):
    pass


class MissingItem(EvalError):
    pass


@dataclass(frozen=True)
class QAItem:
    item_id: str
    video_id: str
    question: str
    kind: str  # "mcq" | "open"
    options: tuple[tuple[str, str], ...] | None
    gold: str
    task_type: str
    domain: str | None = None


def _validate_item(doc: dict, line: int) -> QAItem:
    for key in ("item_id", "video_id", "question", "kind", "gold", "task_type"):
        if not isinstance(doc.get(key), str) or not doc[key]:
            raise SchemaError(line, f"{key} must be a non-empty string")
    kind = doc["kind"]
    if kind not in ("mcq", "open"):
        raise SchemaError(line, f"kind must be mcq or open, got {kind!r}")
    options = doc.get("options")
    parsed_options: tuple[tuple[str, str], ...] | None = None
    if kind == "mcq":
        if not isinstance(options, list) or not 2 <= len(options) <= 4:
            raise SchemaError(line, "mcq items need 2-4 options")
        pairs = []
        for opt in options:
            if (
                not isinstance(opt, (list, tuple))
                or len(opt) != 2
                or not all(isinstance(x, str) for x in opt)
            ):
                raise SchemaError(line, f"bad option entry {opt!r}")
            pairs.append((opt[0], opt[1]))
        letters = [letter for letter, _ in pairs]
        if len(set(letters)) != len(letters):
            raise SchemaError(line, "duplicate option letters")
        if doc["gold"] not in letters:
            raise SchemaError(line, f"gold {doc['gold']!r} not among option letters")
        parsed_options = tuple(pairs)
    elif options not in (None, []):
        raise SchemaError(line, "open items must not carry options")
    domain = doc.get("domain")
    if domain is not None and not isinstance(domain, str):
        raise SchemaError(line, "domain must be a string or null")
    return QAItem(
        item_id=doc["item_id"],
        video_id=doc["video_id"],
        question=doc["question"],
        kind=kind,
        options=parsed_options,
        gold=doc["gold"],
        task_type=doc["task_type"],
        domain=domain,
    )


def load_qa(path: str | Path) -> list[QAItem]:
    items: list[QAItem] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(line_no, f"invalid JSON ({exc})") from exc
        if not isinstance(doc, dict):
            raise SchemaError(line_no, "item must be a JSON object")
        item = _validate_item(doc, line_no)
        if item.item_id in seen:
            raise DuplicateId(f"line {line_no}: duplicate item_id {item.item_id!r}")
        seen.add(item.item_id)
        items.append(item)
    return items


def render_mcq_question(item: QAItem) -> str:
    """Question text with lettered options appended, for prompting."""
    if item.kind != "mcq" or not item.options:
        return item.question
    lines = [item.question, "Options:"]
    lines.extend(f"{letter}) {text}" for letter, text in item.options)
    return "\n".join(lines)
