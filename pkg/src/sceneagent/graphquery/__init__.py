from .ast import (
    Condition,
    EdgeSpec,
    NodeSpec,
    QueryAst,
    render_condition,
    render_query,
)
from .executor import (
    ExecutionTrace,
    PlanError,
    ResultSet,
    UnboundVariable,
    execute,
    graph_summary,
    latest_contact,
    run_query,
)
from .parser import QuerySyntaxError, parse_query, tokenize

__all__ = [
    "Condition",
    "EdgeSpec",
    "ExecutionTrace",
    "NodeSpec",
    "PlanError",
    "QueryAst",
    "QuerySyntaxError",
    "ResultSet",
    "UnboundVariable",
    "execute",
    "graph_summary",
    "latest_contact",
    "parse_query",
    "render_condition",
    "render_query",
    "run_query",
    "tokenize",
]
