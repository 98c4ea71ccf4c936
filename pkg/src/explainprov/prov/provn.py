"""Reader and writer for a PROV-N subset.

Supported statements::

    entity(id [, [attrs]])
    agent(id [, [attrs]])
    activity(id [, start, end] [, [attrs]])
    wasGeneratedBy([id;] entity, activity [, time] [, [attrs]])
    used([id;] activity, entity [, time] [, [attrs]])
    wasAttributedTo / wasAssociatedWith / actedOnBehalfOf /
    wasDerivedFrom / wasInformedBy([id;] a, b [, [attrs]])

Times may be replaced by the ``-`` marker.  Attribute values are ``'pre:local'``
(qualified name), ``"text"`` (string), ``"lex" %% pre:dt`` (typed literal) or a
bare number (``xsd:int`` / ``xsd:double``).  Relations written without an id
get ``_:r1``, ``_:r2``, ... in document order; these are never written back.
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping

from ..errors import (
    DuplicateIdError,
    ProvError,
    ProvSyntaxError,
    UndeclaredPrefixError,
    UnsupportedStatementError,
)
from .model import (
    DEFAULT_NAMESPACES,
    KIND_BY_KEYWORD,
    XSD_NS,
    AttributeValue,
    Element,
    Kind,
    ProvDocument,
    QualifiedName,
    Relation,
    Statement,
    StringLiteral,
    TypedLiteral,
    synthetic_id,
)

_LOCAL = r"[A-Za-z0-9_\-./%~]*[A-Za-z0-9_\-/%~]"
QNAME_RE = re.compile(rf"[A-Za-z_][A-Za-z0-9_\-.]*:(?:{_LOCAL})?")

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("LCOMMENT", r"//[^\n]*"),
    ("BCOMMENT", r"/\*.*?\*/"),
    ("IRI", r"<[^<>\s]*>"),
    ("DATETIME", r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?(?:Z|[+-]\d{2}:\d{2})?"),
    ("NUMBER", r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"),
    ("QNAME", QNAME_RE.pattern),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_\-]*"),
    ("STRING", r'"(?:[^"\\]|\\.)*"'),
    ("QSTRING", r"'(?:[^'\\]|\\.)*'"),
    ("TYPEMARK", r"%%"),
    ("PUNCT", r"[()\[\],;=\-]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC), re.S)

_UNSUPPORTED = {
    "specializationOf", "alternateOf", "hadMember", "wasInfluencedBy", "wasStartedBy",
    "wasEndedBy", "wasInvalidatedBy", "mentionOf", "bundle", "endBundle", "wasQuotedFrom",
    "wasRevisionOf", "hadPrimarySource", "collection", "emptyCollection", "default",
}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int) -> None:
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self) -> str:
        return f"{self.kind}({self.text!r})"


def _tokenize(text: str) -> Iterator[_Token]:
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProvSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("WS", "LCOMMENT", "BCOMMENT"):
            yield _Token(kind, value, line, pos - line_start + 1)
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    yield _Token("EOF", "", line, pos - line_start + 1)


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", r"\1", body)


def _escape(text: str, quote: str) -> str:
    return text.replace("\\", "\\\\").replace(quote, "\\" + quote)


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = list(_tokenize(text))
        self.i = 0
        self.namespaces: dict[str, str] = {}

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ProvSyntaxError:
        tok = tok or self.tok
        return ProvSyntaxError(message, tok.line, tok.col)

    def take(self, kind: str, text: str | None = None) -> _Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok.text else tok.kind
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def peek(self, kind: str, text: str | None = None) -> bool:
        tok = self.tok
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind: str, text: str | None = None) -> bool:
        if self.peek(kind, text):
            self.i += 1
            return True
        return False

    def qname(self, tok: _Token, text: str | None = None) -> QualifiedName:
        prefix, _, local = (text if text is not None else tok.text).partition(":")
        ns = self.namespaces.get(prefix, DEFAULT_NAMESPACES.get(prefix))
        if ns is None:
            raise UndeclaredPrefixError(
                f"line {tok.line}, column {tok.col}: undeclared prefix {prefix!r}"
            )
        return QualifiedName(prefix, local, ns + local)

    # -- grammar -------------------------------------------------------

    def document(self) -> ProvDocument:
        self.take("IDENT", "document")
        while self.peek("IDENT", "prefix"):
            self.i += 1
            name = self.tok
            if name.kind != "IDENT":
                raise self.error("expected prefix name")
            self.i += 1
            iri = self.take("IRI").text[1:-1]
            self.namespaces[name.text] = iri
        statements: list[Statement] = []
        ids: set[str] = set()
        counter = 0
        while not self.peek("IDENT", "endDocument"):
            tok = self.tok
            if tok.kind == "EOF":
                raise self.error("missing endDocument")
            st, synthetic = self.statement()
            if synthetic:
                counter += 1
                st = Relation(st.kind, synthetic_id(counter), st.fields, st.time, st.attributes)
            if st.id.iri in ids:
                raise DuplicateIdError(f"line {tok.line}, column {tok.col}: duplicate id {st.id}")
            ids.add(st.id.iri)
            statements.append(st)
        self.take("IDENT", "endDocument")
        self.take("EOF")
        return ProvDocument(dict(self.namespaces), tuple(statements))

    def statement(self) -> tuple[Statement, bool]:
        tok = self.tok
        if tok.kind != "IDENT":
            raise self.error(f"expected a statement, found {tok.text!r}")
        if tok.text in _UNSUPPORTED:
            raise UnsupportedStatementError(
                f"line {tok.line}, column {tok.col}: unsupported statement {tok.text!r}"
            )
        kind = KIND_BY_KEYWORD.get(tok.text)
        if kind is None:
            raise self.error(f"unknown statement {tok.text!r}")
        self.i += 1
        self.take("PUNCT", "(")
        if kind.is_element:
            return self.element(kind), False
        return self.relation(kind)

    def element(self, kind: Kind) -> Element:
        ident = self.qname(self.take("QNAME"))
        start = end = None
        attrs: tuple = ()
        if kind is Kind.ACTIVITY and self.peek("PUNCT", ",") and not self._next_is_attrs():
            self.i += 1
            start = self.time_or_marker()
            self.take("PUNCT", ",")
            end = self.time_or_marker()
        if self.accept("PUNCT", ","):
            attrs = self.attributes()
        self.take("PUNCT", ")")
        return Element(kind, ident, attrs, start, end)

    def _next_is_attrs(self) -> bool:
        nxt = self.tokens[self.i + 1]
        return nxt.kind == "PUNCT" and nxt.text == "["

    def relation(self, kind: Kind) -> tuple[Relation, bool]:
        ident = None
        first = self.qname(self.take("QNAME"))
        if self.accept("PUNCT", ";"):
            ident = first
            first = self.qname(self.take("QNAME"))
        self.take("PUNCT", ",")
        second = self.qname(self.take("QNAME"))
        time = None
        attrs: tuple = ()
        if kind.has_time and self.peek("PUNCT", ",") and not self._next_is_attrs():
            self.i += 1
            time = self.time_or_marker()
        if self.accept("PUNCT", ","):
            attrs = self.attributes()
        self.take("PUNCT", ")")
        fields = tuple(zip(kind.fields, (first, second)))
        placeholder = ident or synthetic_id(0)
        return Relation(kind, placeholder, fields, time, attrs), ident is None

    def time_or_marker(self) -> str | None:
        if self.accept("PUNCT", "-"):
            return None
        tok = self.take("DATETIME")
        return tok.text

    def attributes(self) -> tuple:
        self.take("PUNCT", "[")
        pairs = []
        if not self.peek("PUNCT", "]"):
            while True:
                key = self.qname(self.take("QNAME"))
                self.take("PUNCT", "=")
                pairs.append((key, self.value()))
                if not self.accept("PUNCT", ","):
                    break
        self.take("PUNCT", "]")
        return tuple(pairs)

    def value(self) -> AttributeValue:
        tok = self.tok
        if tok.kind == "QSTRING":
            self.i += 1
            body = _unescape(tok.text[1:-1])
            if not QNAME_RE.fullmatch(body):
                raise self.error(f"not a qualified name: {body!r}", tok)
            return self.qname(tok, body)
        if tok.kind == "STRING":
            self.i += 1
            body = _unescape(tok.text[1:-1])
            if self.accept("TYPEMARK"):
                dt = self.qname(self.take("QNAME"))
                try:
                    return TypedLiteral(body, dt)
                except ProvError as exc:
                    raise self.error(str(exc), tok) from None
            return StringLiteral(body)
        if tok.kind == "NUMBER":
            self.i += 1
            local = "int" if re.fullmatch(r"-?\d+", tok.text) else "double"
            return TypedLiteral(tok.text, QualifiedName("xsd", local, XSD_NS + local))
        raise self.error(f"expected an attribute value, found {tok.text!r}")


def parse_provn(text: str) -> ProvDocument:
    """Parse PROV-N source into a :class:`ProvDocument`."""
    return _Parser(text).document()


def format_qname(q: QualifiedName) -> str:
    return f"{q.prefix}:{q.local}"


def format_value(value: AttributeValue) -> str:
    if isinstance(value, QualifiedName):
        return f"'{format_qname(value)}'"
    if isinstance(value, TypedLiteral):
        return f'"{_escape(value.lexical, chr(34))}" %% {format_qname(value.datatype)}'
    return f'"{_escape(value.value, chr(34))}"'


def _format_attrs(attrs) -> str:
    inner = ", ".join(f"{format_qname(k)}={format_value(v)}" for k, v in attrs)
    return f"[{inner}]"


def format_statement(st: Statement) -> str:
    args: list[str] = []
    if isinstance(st, Element):
        args.append(format_qname(st.id))
        if st.start is not None or st.end is not None:
            args += [st.start or "-", st.end or "-"]
    else:
        first, second = (format_qname(q) for _, q in st.fields)
        args.append(first if st.id.is_synthetic else f"{format_qname(st.id)}; {first}")
        args.append(second)
        if st.time is not None:
            args.append(st.time)
    if st.attributes:
        args.append(_format_attrs(st.attributes))
    return f"{st.kind.keyword}({', '.join(args)})"


def write_provn(doc: ProvDocument, namespaces: Mapping[str, str] | None = None) -> str:
    """Serialize ``doc`` to PROV-N text (synthetic relation ids are omitted)."""
    lines = ["document"]
    for prefix, iri in (namespaces if namespaces is not None else doc.namespaces).items():
        lines.append(f"  prefix {prefix} <{iri}>")
    for st in doc.statements:
        lines.append("  " + format_statement(st))
    lines.append("endDocument")
    return "\n".join(lines) + "\n"
