"""Versioned prompt templates shipped as text files.

Templates use named ``{placeholder}`` markers. Rendering substitutes only the
placeholders passed in, so literal braces elsewhere (e.g. JSON examples) are
left untouched.
"""

from __future__ import annotations

from importlib import resources

PROMPT_VERSIONS = {
    "react_system": "react_system_v1",
    "react_user": "react_user_v1",
    "answer": "answer_v1",
    "video_qa": "video_qa_v1",
    "extraction": "extraction_v1",
    "extraction_strict": "extraction_strict_v1",
    "judge": "judge_v1",
    "judge_strict": "judge_strict_v1",
    "canonicalize": "canonicalize_v1",
    "nl2query": "nl2query_v1",
}


def load_prompt(name: str) -> str:
    """Load a template by versioned name, e.g. ``judge_v1``."""
    return resources.files("sceneagent.prompts").joinpath(f"{name}.txt").read_text("utf-8")


def render_template(template: str, **fields: str) -> str:
    for key, value in fields.items():
        template = template.replace("{" + key + "}", value)
    return template
