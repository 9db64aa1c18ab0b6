"""Hand-rolled tokenizer and recursive-descent parser for the query language.

Grammar (keywords case-insensitive, identifiers [a-z_][a-z0-9_]*, string
literals single-quoted, ints unsigned decimal):

  query  = "MATCH" pat [wh] "RETURN" var [ord] [lim]
         | "COUNT" pat [wh]
         | "EXISTS" pat [wh]
  pat    = "(" var [":" ident] ")" "-[" var [":" ident] "]->" "(" var [":" ident] ")"
  wh     = "WHERE" cond {"AND" cond}
  cond   = var "." field op literal
  ord    = "LATEST" | "EARLIEST"
  lim    = "LIMIT" int

Syntax errors carry a 1-based character offset and the expected-token set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import FIELDS, STRING_OPS, Condition, EdgeSpec, NodeSpec, QueryAst

KEYWORDS = {"match", "count", "exists", "where", "and", "return", "latest", "earliest", "limit"}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")
_PUNCT = ("-[", "]->", "<=", ">=", "!=", "(", ")", ":", ".", "=", "<", ">")


class QuerySyntaxError(Exception):
    """Invalid query text; offset is 1-based into the original string."""

    def __init__(self, offset: int, expected: set[str], found: str):
        self.offset = offset
        self.expected = set(expected)
        self.found = found
        shown = ", ".join(sorted(self.expected))
        super().__init__(f"at offset {offset}: expected {shown}, found {found}")


@dataclass(frozen=True)
class Token:
    kind: str  # "keyword" | "ident" | "int" | "string" | punctuation literal | "eof"
    text: str
    offset: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        offset = pos + 1
        matched_punct = next((p for p in _PUNCT if text.startswith(p, pos)), None)
        if matched_punct is not None:
            tokens.append(Token(kind=matched_punct, text=matched_punct, offset=offset))
            pos += len(matched_punct)
            continue
        if ch == "'":
            end = text.find("'", pos + 1)
            if end == -1:
                raise QuerySyntaxError(offset, {"closing quote"}, "end of input")
            tokens.append(Token(kind="string", text=text[pos + 1 : end], offset=offset))
            pos = end + 1
            continue
        m = _INT_RE.match(text, pos)
        if m:
            tokens.append(Token(kind="int", text=m.group(), offset=offset))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            word = m.group()
            if word.lower() in KEYWORDS:
                tokens.append(Token(kind="keyword", text=word.lower(), offset=offset))
            elif re.fullmatch(r"[a-z_][a-z0-9_]*", word):
                tokens.append(Token(kind="ident", text=word, offset=offset))
            else:
                raise QuerySyntaxError(offset, {"lowercase identifier"}, word)
            pos = m.end()
            continue
        raise QuerySyntaxError(offset, {"token"}, ch)
    tokens.append(Token(kind="eof", text="", offset=n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, expected: set[str]) -> None:
        token = self.peek()
        found = token.text if token.kind != "eof" else "end of input"
        raise QuerySyntaxError(token.offset, expected, found)

    def expect(self, kind: str, expected_name: str | None = None) -> Token:
        if self.peek().kind != kind:
            self.fail({expected_name or kind})
        return self.advance()

    def accept_keyword(self, *words: str) -> Token | None:
        token = self.peek()
        if token.kind == "keyword" and token.text in words:
            return self.advance()
        return None

    def expect_keyword(self, *words: str) -> Token:
        token = self.accept_keyword(*words)
        if token is None:
            self.fail({w.upper() for w in words})
        return token

    def parse(self) -> QueryAst:
        form_token = self.expect_keyword("match", "count", "exists")
        form = form_token.text
        src, edge, dst = self.pattern()
        where = self.where_clause()
        selector = order = None
        limit = None
        if form == "match":
            self.expect_keyword("return")
            selector = self.expect("ident", "variable").text
            ord_token = self.accept_keyword("latest", "earliest")
            if ord_token:
                order = ord_token.text
            if self.accept_keyword("limit"):
                limit_token = self.expect("int", "positive integer")
                limit = int(limit_token.text)
                if limit < 1:
                    raise QuerySyntaxError(
                        limit_token.offset, {"positive integer"}, limit_token.text
                    )
        if self.peek().kind != "eof":
            self.fail({"end of input"})
        return QueryAst(
            form=form,
            src=src,
            edge=edge,
            dst=dst,
            where=tuple(where),
            selector=selector,
            order=order,
            limit=limit,
        )

    def node_spec(self) -> NodeSpec:
        self.expect("(")
        var = self.expect("ident", "variable").text
        category = None
        if self.peek().kind == ":":
            self.advance()
            category = self.expect("ident", "category").text
        self.expect(")")
        return NodeSpec(var=var, category=category)

    def pattern(self) -> tuple[NodeSpec, EdgeSpec, NodeSpec]:
        src = self.node_spec()
        self.expect("-[")
        var = self.expect("ident", "variable").text
        relation = None
        if self.peek().kind == ":":
            self.advance()
            relation = self.expect("ident", "relation").text
        self.expect("]->")
        dst = self.node_spec()
        return src, EdgeSpec(var=var, relation=relation), dst

    def where_clause(self) -> list[Condition]:
        conditions: list[Condition] = []
        if not self.accept_keyword("where"):
            return conditions
        conditions.append(self.condition())
        while self.accept_keyword("and"):
            conditions.append(self.condition())
        return conditions

    def condition(self) -> Condition:
        var = self.expect("ident", "variable").text
        self.expect(".")
        field_token = self.expect("ident", "field")
        if field_token.text not in FIELDS:
            raise QuerySyntaxError(field_token.offset, set(FIELDS), field_token.text)
        op_token = self.peek()
        if op_token.kind not in ("=", "!=", "<", "<=", ">", ">="):
            self.fail({"comparison operator"})
        self.advance()
        lit_token = self.peek()
        literal: str | int
        if lit_token.kind == "string":
            if op_token.kind not in STRING_OPS:
                raise QuerySyntaxError(
                    lit_token.offset, {"integer literal (strings allow only = and !=)"},
                    f"'{lit_token.text}'",
                )
            literal = self.advance().text
        elif lit_token.kind == "int":
            literal = int(self.advance().text)
        else:
            self.fail({"string literal", "integer literal"})
        return Condition(var=var, field=field_token.text, op=op_token.kind, literal=literal)


def parse_query(text: str) -> QueryAst:
    return _Parser(tokenize(text)).parse()
