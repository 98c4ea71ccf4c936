"""Recursive-descent parser for provenance queries.

Grammar (keywords are case-insensitive, ``#`` starts a comment)::

    query      ::= prefix* "select" "*" from+ where? group?
    prefix     ::= "prefix" NAME IRI
    from       ::= "from" NAME "a" QNAME join*
    join       ::= "join" NAME "." NAME "=" NAME "." NAME
    where      ::= "where" cond ("and" cond)*
    cond       ::= NAME "[" QNAME "]" (">=" | "=") STRING
    group      ::= "group" "by" NAME "aggregate" NAME "with" NAME
"""

from __future__ import annotations

import re
from typing import Iterator

from ..errors import QueryError, QuerySyntaxError
from ..prov.model import (
    DEFAULT_NAMESPACES,
    KIND_BY_TYPE_IRI,
    PROVEXT_NS,
    QualifiedName,
    StringLiteral,
)
from .ast import Filter, FromClause, GroupBy, Join, QueryAst, fields_for

QUERY_NAMESPACES = {**DEFAULT_NAMESPACES, "provext": PROVEXT_NS}
SUPPORTED_AGGREGATES = ("Seq",)

_QNAME = r"[A-Za-z_][A-Za-z0-9_\-.]*:[A-Za-z0-9_\-./%~]*[A-Za-z0-9_\-/%~]"
_TOKEN_RE = re.compile(
    "|".join(
        f"(?P<{n}>{p})"
        for n, p in [
            ("WS", r"\s+"),
            ("IRI", r"<[^<>\s]*>"),
            ("COMMENT", r"#[^\n]*"),
            ("STRING", r"'(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\""),
            ("OP", r">=|=|\.|\*|\[|\]"),
            ("QNAME", _QNAME),
            ("NAME", r"[A-Za-z_][A-Za-z0-9_\-]*"),
        ]
    )
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str) -> Iterator[_Tok]:
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        if m.lastgroup not in ("WS", "COMMENT"):
            yield _Tok(m.lastgroup, m.group(), line, pos - line_start + 1)
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    yield _Tok("EOF", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = list(_tokenize(text))
        self.i = 0
        self.prefixes: dict[str, str] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message: str, tok: _Tok | None = None) -> QuerySyntaxError:
        tok = tok or self.tok
        return QuerySyntaxError(message, tok.line, tok.col)

    def is_kw(self, word: str) -> bool:
        return self.tok.kind == "NAME" and self.tok.text.lower() == word

    def kw(self, word: str) -> None:
        if not self.is_kw(word):
            raise self.fail(f"expected {word!r}, found {self.tok.text or 'end of query'!r}")
        self.i += 1

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind.lower()
            raise self.fail(f"expected {want}, found {tok.text or 'end of query'!r}")
        self.i += 1
        return tok

    def qname(self, tok: _Tok, text: str | None = None) -> QualifiedName:
        text = text if text is not None else tok.text
        prefix, _, local = text.partition(":")
        ns = self.prefixes.get(prefix, QUERY_NAMESPACES.get(prefix))
        if ns is None:
            raise QueryError(f"line {tok.line}, column {tok.col}: undeclared prefix {prefix!r}")
        return QualifiedName(prefix, local, ns + local)

    def query(self) -> QueryAst:
        while self.is_kw("prefix"):
            self.i += 1
            name = self.take("NAME").text
            self.prefixes[name] = self.take("IRI").text[1:-1]
        self.kw("select")
        self.take("OP", "*")
        clauses: list[FromClause] = []
        kinds: dict[str, object] = {}
        while self.is_kw("from"):
            clauses.append(self.from_clause(kinds))
        if not clauses:
            raise self.fail("expected 'from'")
        filters: list[Filter] = []
        if self.is_kw("where"):
            self.i += 1
            filters.append(self.condition(kinds))
            while self.is_kw("and"):
                self.i += 1
                filters.append(self.condition(kinds))
        group = None
        if self.is_kw("group"):
            self.i += 1
            self.kw("by")
            group_var = self.variable(kinds)
            self.kw("aggregate")
            agg_var = self.variable(kinds)
            self.kw("with")
            tok = self.take("NAME")
            if tok.text not in SUPPORTED_AGGREGATES:
                raise QueryError(
                    f"line {tok.line}, column {tok.col}: unsupported aggregate {tok.text!r}"
                )
            if agg_var == group_var:
                raise QueryError("cannot aggregate the grouping variable")
            group = GroupBy(group_var, agg_var, tok.text)
        if self.tok.kind != "EOF":
            raise self.fail(f"unexpected {self.tok.text!r}")
        return QueryAst(dict(self.prefixes), tuple(clauses), tuple(filters), group)

    def variable(self, kinds: dict) -> str:
        tok = self.take("NAME")
        if tok.text not in kinds:
            raise QueryError(f"line {tok.line}, column {tok.col}: undeclared variable {tok.text!r}")
        return tok.text

    def from_clause(self, kinds: dict) -> FromClause:
        self.kw("from")
        var_tok = self.take("NAME")
        if var_tok.text in kinds:
            raise QueryError(
                f"line {var_tok.line}, column {var_tok.col}: variable {var_tok.text!r} declared twice"
            )
        self.kw("a")
        type_tok = self.take("QNAME")
        record_type = self.qname(type_tok)
        kind = KIND_BY_TYPE_IRI.get(record_type.iri)
        if kind is None:
            raise QueryError(
                f"line {type_tok.line}, column {type_tok.col}: unknown record type {type_tok.text!r}"
            )
        kinds[var_tok.text] = kind
        joins = []
        while self.is_kw("join"):
            self.i += 1
            left = self.field_ref(kinds)
            self.take("OP", "=")
            right = self.field_ref(kinds)
            joins.append(Join(left[0], left[1], right[0], right[1]))
        return FromClause(var_tok.text, record_type, tuple(joins))

    def field_ref(self, kinds: dict) -> tuple[str, str]:
        var = self.variable(kinds)
        self.take("OP", ".")
        tok = self.take("NAME")
        if tok.text not in fields_for(kinds[var]):
            raise QueryError(
                f"line {tok.line}, column {tok.col}: unknown field {tok.text!r} "
                f"for {kinds[var].type_name} variable {var!r}"
            )
        return var, tok.text

    def condition(self, kinds: dict) -> Filter:
        var = self.variable(kinds)
        self.take("OP", "[")
        attribute = self.qname(self.take("QNAME"))
        self.take("OP", "]")
        if not (self.tok.kind == "OP" and self.tok.text in (">=", "=")):
            raise self.fail("expected '>=' or '='")
        self.i += 1
        tok = self.take("STRING")
        body = re.sub(r"\\(.)", r"\1", tok.text[1:-1])
        if tok.text[0] == "'" and re.fullmatch(_QNAME, body):
            literal = self.qname(tok, body)
        else:
            literal = StringLiteral(body)
        return Filter(var, attribute, literal)


def parse_query(text: str) -> QueryAst:
    return _Parser(text).query()
