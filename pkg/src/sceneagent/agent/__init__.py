from .loop import (
    AgentConfig,
    AgentStep,
    AgentTrace,
    build_answer_request,
    build_react_request,
    estimate_confidence,
    normalize_answer,
    run_agent,
)
from .parsing import FinalAnswer, ToolCall, UnparsableAction, parse_action
from .tools import ToolError, ToolSpec, default_registry, invoke_tool, render_tool_list

__all__ = [
    "AgentConfig",
    "AgentStep",
    "AgentTrace",
    "FinalAnswer",
    "ToolCall",
    "ToolError",
    "ToolSpec",
    "UnparsableAction",
    "build_answer_request",
    "build_react_request",
    "default_registry",
    "estimate_confidence",
    "invoke_tool",
    "normalize_answer",
    "parse_action",
    "render_tool_list",
    "run_agent",
]
