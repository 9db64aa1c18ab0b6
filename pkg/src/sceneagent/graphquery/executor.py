"""Query planning and execution over a scene graph, with verifiable traces.

Node patterns match on the node's category id or on its kind (so
``(a:instrument)`` matches scalpel and forceps nodes alike). Unknown
categories or relations are not errors; they simply match nothing, and the
trace records every narrowing step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..scenegraph.model import SceneEdge, SceneGraph
from ..scenegraph.vocabulary import Vocabulary, load_vocabulary
from .ast import (
    EDGE_FIELDS,
    NODE_FIELDS,
    Condition,
    EdgeSpec,
    NodeSpec,
    QueryAst,
    render_condition,
)
from .parser import parse_query


class PlanError(Exception):
    pass


class UnboundVariable(PlanError):
    pass


@dataclass
class ExecutionTrace:
    candidate_count: int = 0
    filter_steps: list[tuple[str, int]] = field(default_factory=list)
    order_key: str = "edge_id asc"
    chosen_ids: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "candidate_count": self.candidate_count,
            "filter_steps": [[desc, count] for desc, count in self.filter_steps],
            "order_key": self.order_key,
            "chosen_ids": list(self.chosen_ids),
        }


@dataclass
class ResultSet:
    rows: list[dict[str, str]]
    value: int | bool | None
    trace: ExecutionTrace

    def to_doc(self) -> dict:
        return {"rows": self.rows, "value": self.value, "trace": self.trace.to_doc()}


def _check_plan(ast: QueryAst) -> None:
    bound = {ast.src.var: "node", ast.edge.var: "edge", ast.dst.var: "node"}
    if len(bound) != 3:
        raise PlanError("pattern variables must be distinct")
    if ast.form == "match":
        if ast.selector not in bound:
            raise UnboundVariable(f"RETURN variable {ast.selector!r} is not bound")
    for cond in ast.where:
        kind = bound.get(cond.var)
        if kind is None:
            raise UnboundVariable(f"condition variable {cond.var!r} is not bound")
        allowed = NODE_FIELDS if kind == "node" else EDGE_FIELDS
        if cond.field not in allowed:
            raise PlanError(
                f"field {cond.field!r} does not apply to {kind} variable {cond.var!r}"
            )
        if cond.field in ("category", "relation") and not isinstance(cond.literal, str):
            raise PlanError(f"field {cond.field!r} compares against a string literal")
        if cond.field in ("t_start", "t_end", "confidence") and isinstance(cond.literal, str):
            raise PlanError(f"field {cond.field!r} compares against a numeric literal")


def _category_matches(node_category: str, wanted: str, vocab: Vocabulary) -> bool:
    return node_category == wanted or vocab.kind_of(node_category) == wanted


def _node_passes(spec: NodeSpec, node_id: str, graph: SceneGraph, vocab: Vocabulary) -> bool:
    if spec.category is None:
        return True
    return _category_matches(graph.nodes[node_id].category, spec.category, vocab)


def _condition_value(cond: Condition, edge: SceneEdge, graph: SceneGraph, ast: QueryAst):
    if cond.var == ast.edge.var:
        return getattr(edge, cond.field)
    node_id = edge.src if cond.var == ast.src.var else edge.dst
    return graph.nodes[node_id].category


def _apply_op(value, op: str, literal) -> bool:
    if op == "=":
        return value == literal
    if op == "!=":
        return value != literal
    if op == "<":
        return value < literal
    if op == "<=":
        return value <= literal
    if op == ">":
        return value > literal
    return value >= literal


def execute(ast: QueryAst, graph: SceneGraph, vocabulary: Vocabulary | None = None) -> ResultSet:
    _check_plan(ast)
    vocab = vocabulary or load_vocabulary(graph.vocabulary_version)
    trace = ExecutionTrace()
    surviving: list[SceneEdge] = [edge for _, edge in sorted(graph.edges.items())]
    trace.candidate_count = len(surviving)

    def narrow(description: str, predicate) -> None:
        nonlocal surviving
        surviving = [e for e in surviving if predicate(e)]
        trace.filter_steps.append((description, len(surviving)))

    if ast.src.category is not None:
        narrow(f"src:{ast.src.category}", lambda e: _node_passes(ast.src, e.src, graph, vocab))
    if ast.edge.relation is not None:
        narrow(f"rel:{ast.edge.relation}", lambda e: e.relation == ast.edge.relation)
    if ast.dst.category is not None:
        narrow(f"dst:{ast.dst.category}", lambda e: _node_passes(ast.dst, e.dst, graph, vocab))
    for cond in ast.where:
        narrow(
            render_condition(cond),
            lambda e, c=cond: _apply_op(_condition_value(c, e, graph, ast), c.op, c.literal),
        )

    if ast.form == "count":
        trace.chosen_ids = [e.edge_id for e in surviving]
        return ResultSet(rows=[], value=len(surviving), trace=trace)
    if ast.form == "exists":
        trace.chosen_ids = [e.edge_id for e in surviving]
        return ResultSet(rows=[], value=bool(surviving), trace=trace)

    if ast.order == "latest":
        trace.order_key = "t_end desc, edge_id asc"
        surviving.sort(key=lambda e: (-e.t_end, e.edge_id))
        take = max(1, ast.limit or 1)
    elif ast.order == "earliest":
        trace.order_key = "t_start asc, edge_id asc"
        surviving.sort(key=lambda e: (e.t_start, e.edge_id))
        take = max(1, ast.limit or 1)
    else:
        trace.order_key = "edge_id asc"
        take = ast.limit if ast.limit is not None else len(surviving)
    chosen = surviving[:take]
    trace.chosen_ids = [e.edge_id for e in chosen]

    def binding(edge: SceneEdge) -> str:
        if ast.selector == ast.edge.var:
            return edge.edge_id
        return edge.src if ast.selector == ast.src.var else edge.dst

    rows = [{ast.selector: binding(e)} for e in chosen]
    return ResultSet(rows=rows, value=None, trace=trace)


def run_query(text: str, graph: SceneGraph, vocabulary: Vocabulary | None = None) -> ResultSet:
    """Parse then execute; parser and plan errors propagate."""
    return execute(parse_query(text), graph, vocabulary)


def latest_contact(
    graph: SceneGraph,
    tool_category: str,
    target_category: str,
    vocabulary: Vocabulary | None = None,
) -> str | None:
    """Node that most recently contacted the target (ties: edge_id ascending)."""
    query = (
        f"MATCH (a:{tool_category})-[r:contacts]->(b:{target_category}) RETURN a LATEST"
    )
    result = run_query(query, graph, vocabulary)
    if not result.rows:
        return None
    return result.rows[0]["a"]


def graph_summary(graph: SceneGraph, n: int = 5) -> str:
    """Deterministic one-line counts plus the n edges with greatest t_end."""
    if n < 1:
        raise ValueError("n must be positive")
    lines = [f"nodes:{len(graph.nodes)} edges:{len(graph.edges)}"]
    latest = sorted(graph.edges.values(), key=lambda e: (-e.t_end, e.edge_id))[:n]
    for edge in latest:
        lines.append(f"{edge.src} -{edge.relation}-> {edge.dst} [{edge.t_start},{edge.t_end}]")
    return "\n".join(lines)
