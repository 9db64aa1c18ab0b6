"""Query AST for the small graph query language, plus a canonical renderer."""

from __future__ import annotations

from dataclasses import dataclass, field

FORMS = ("match", "count", "exists")
ORDERS = ("latest", "earliest")
NODE_FIELDS = ("category",)
EDGE_FIELDS = ("relation", "t_start", "t_end", "confidence")
FIELDS = ("t_start", "t_end", "category", "relation", "confidence")
OPS = ("=", "!=", "<", "<=", ">", ">=")
STRING_OPS = ("=", "!=")


@dataclass(frozen=True)
class NodeSpec:
    var: str
    category: str | None = None


@dataclass(frozen=True)
class EdgeSpec:
    var: str
    relation: str | None = None


@dataclass(frozen=True)
class Condition:
    var: str
    field: str
    op: str
    literal: str | int


@dataclass(frozen=True)
class QueryAst:
    form: str
    src: NodeSpec
    edge: EdgeSpec
    dst: NodeSpec
    where: tuple[Condition, ...] = field(default_factory=tuple)
    selector: str | None = None  # match only
    order: str | None = None  # None | "latest" | "earliest"
    limit: int | None = None


def render_condition(cond: Condition) -> str:
    literal = f"'{cond.literal}'" if isinstance(cond.literal, str) else str(cond.literal)
    return f"{cond.var}.{cond.field} {cond.op} {literal}"


def render_query(ast: QueryAst) -> str:
    """Canonical text form; parsing it back yields an identical AST."""

    def node(spec: NodeSpec) -> str:
        return f"({spec.var}:{spec.category})" if spec.category else f"({spec.var})"

    def edge(spec: EdgeSpec) -> str:
        return f"-[{spec.var}:{spec.relation}]->" if spec.relation else f"-[{spec.var}]->"

    parts = [ast.form.upper(), node(ast.src) + edge(ast.edge) + node(ast.dst)]
    if ast.where:
        parts.append("WHERE " + " AND ".join(render_condition(c) for c in ast.where))
    if ast.form == "match":
        parts.append(f"RETURN {ast.selector}")
        if ast.order:
            parts.append(ast.order.upper())
        if ast.limit is not None:
            parts.append(f"LIMIT {ast.limit}")
    return " ".join(parts)
