"""Parsing model output into (thought, action) per the loop's response grammar.

Grammar: an optional "Thought:" line, then exactly one of
"Action: <tool_name> <json-object-args>" or "Final Answer: <text>". The first
conforming block wins; trailing text after an action is ignored, while a
final answer keeps the rest of the output.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass


class UnparsableAction(Exception):
    pass


@dataclass(frozen=True)
class ToolCall:
    tool: str
    args: dict


@dataclass(frozen=True)
class FinalAnswer:
    text: str


_THOUGHT_RE = re.compile(r"^\s*Thought:\s*(.*)$")
_ACTION_RE = re.compile(r"^\s*Action:\s*([a-z_]+)\s*(.*)$", re.DOTALL)
_FINAL_RE = re.compile(r"^\s*Final Answer:\s*(.*)$", re.DOTALL)


def parse_action(model_output: str) -> tuple[str, ToolCall | FinalAnswer]:
    thought = ""
    lines = model_output.split("\n")
    for i, line in enumerate(lines):
        thought_match = _THOUGHT_RE.match(line)
        if thought_match and not thought:
            thought = thought_match.group(1).strip()
            continue
        rest = "\n".join(lines[i:])
        final_match = _FINAL_RE.match(rest)
        if final_match:
            return thought, FinalAnswer(text=final_match.group(1).strip())
        action_match = _ACTION_RE.match(rest)
        if action_match:
            tool = action_match.group(1)
            tail = action_match.group(2)
            brace = tail.find("{")
            if brace == -1:
                raise UnparsableAction(f"no JSON arguments after tool {tool!r}")
            try:
                args, _ = json.JSONDecoder().raw_decode(tail[brace:])
            except json.JSONDecodeError as exc:
                raise UnparsableAction(f"bad JSON arguments for {tool!r}: {exc}") from exc
            if not isinstance(args, dict):
                raise UnparsableAction(f"arguments for {tool!r} must be a JSON object")
            return thought, ToolCall(tool=tool, args=args)
    raise UnparsableAction("no Action or Final Answer line found")
