"""Provenance templates and their expansion with logged bindings.

A template is a PROV document in which identifiers and attribute values may be
``var:`` placeholders.  Applications log one CSV per decision in long format::

    template,instance,variable,value
    attribution,1,record,cs:records/956
    attribution,1,provider,cs:agencies/cra1

Each ``(template, instance)`` group instantiates its template once; the
expansions of all groups are merged into the decision's provenance.
"""

from __future__ import annotations

import csv
import io
import re
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import BindingsError, ExpansionError, ProvError
from .prov.model import (
    DEFAULT_NAMESPACES,
    VAR_NS,
    AttributeValue,
    Element,
    ProvDocument,
    QualifiedName,
    Relation,
    Statement,
    StringLiteral,
    TypedLiteral,
    synthetic_id,
    value_key,
)

BINDINGS_HEADER = ["template", "instance", "variable", "value"]

_QNAME_SHAPE = re.compile(r"([A-Za-z_][A-Za-z0-9_\-.]*):(\S+)")
_TYPED = re.compile(r'"(.*)"\^\^([A-Za-z_][A-Za-z0-9_\-.]*):(\S+)', re.S)

BindingSet = Mapping[str, AttributeValue]


def _variables_of(st: Statement) -> Iterable[str]:
    names = [st.id]
    if isinstance(st, Relation):
        names += [q for _, q in st.fields]
    names += [v for _, v in st.attributes if isinstance(v, QualifiedName)]
    for q in names:
        if q.is_variable:
            yield q.local


@dataclass(frozen=True)
class Template:
    name: str
    body: ProvDocument
    variables: frozenset[str] = field(default=frozenset())

    @property
    def namespaces(self) -> dict[str, str]:
        return {p: ns for p, ns in self.body.namespaces.items() if ns != VAR_NS}


def load_template(doc: ProvDocument, name: str) -> Template:
    variables = frozenset(v for st in doc.statements for v in _variables_of(st))
    return Template(name, doc, variables)


@dataclass(frozen=True)
class Binding:
    template: str
    instance: str
    variable: str
    value: AttributeValue


@dataclass(frozen=True)
class BindingsTable:
    rows: tuple[Binding, ...] = ()

    def groups(self) -> OrderedDict[tuple[str, str], dict[str, AttributeValue]]:
        """Bindings grouped by ``(template, instance)`` in first-seen order."""
        out: OrderedDict[tuple[str, str], dict[str, AttributeValue]] = OrderedDict()
        for b in self.rows:
            out.setdefault((b.template, b.instance), {})[b.variable] = b.value
        return out

    def templates(self) -> list[str]:
        return list(OrderedDict.fromkeys(b.template for b in self.rows))


def parse_binding_value(cell: str, namespaces: Mapping[str, str]) -> AttributeValue:
    """Interpret one CSV value cell.

    ``pre:local`` with a known prefix is a qualified name, ``"text"`` a
    string, ``"lex"^^pre:dt`` a typed literal; anything else is a plain string.
    """
    ns = {**DEFAULT_NAMESPACES, **namespaces}
    m = _TYPED.fullmatch(cell)
    if m:
        prefix, local = m.group(2), m.group(3)
        if prefix not in ns:
            raise BindingsError(f"unknown prefix {prefix!r} in {cell!r}")
        try:
            return TypedLiteral(m.group(1), QualifiedName(prefix, local, ns[prefix] + local))
        except ProvError as exc:
            raise BindingsError(str(exc)) from None
    if len(cell) >= 2 and cell[0] == cell[-1] == '"':
        return StringLiteral(cell[1:-1])
    m = _QNAME_SHAPE.fullmatch(cell)
    if m:
        prefix, local = m.groups()
        if prefix not in ns:
            raise BindingsError(f"unknown prefix {prefix!r} in {cell!r}")
        return QualifiedName(prefix, local, ns[prefix] + local)
    return StringLiteral(cell)


def parse_bindings_csv(text: str, namespaces: Mapping[str, str] | None = None) -> BindingsTable:
    namespaces = namespaces or {}
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != BINDINGS_HEADER:
        raise BindingsError(f"header must be {','.join(BINDINGS_HEADER)}", row=0)
    rows: list[Binding] = []
    seen: set[tuple[str, str, str]] = set()
    for number, record in enumerate(reader, start=1):
        if not record or all(not c.strip() for c in record):
            continue
        if len(record) != 4:
            raise BindingsError(f"expected 4 columns, found {len(record)}", row=number)
        template, instance, variable, cell = (c.strip() for c in record)
        if not template or not instance or not variable:
            raise BindingsError("template, instance and variable must be non-empty", row=number)
        key = (template, instance, variable)
        if key in seen:
            raise BindingsError(
                f"variable {variable!r} bound twice in ({template}, {instance})", row=number
            )
        seen.add(key)
        try:
            value = parse_binding_value(cell, namespaces)
        except BindingsError as exc:
            raise BindingsError(str(exc), row=number) from None
        rows.append(Binding(template, instance, variable, value))
    return BindingsTable(tuple(rows))


def format_binding_value(value: AttributeValue) -> str:
    if isinstance(value, QualifiedName):
        return str(value)
    if isinstance(value, TypedLiteral):
        return f'"{value.lexical}"^^{value.datatype}'
    return f'"{value.value}"'


def write_bindings_csv(table: BindingsTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BINDINGS_HEADER)
    for b in table.rows:
        writer.writerow([b.template, b.instance, b.variable, format_binding_value(b.value)])
    return buf.getvalue()


# -- expansion -----------------------------------------------------------


def _lookup(q: QualifiedName, bindings: BindingSet) -> AttributeValue:
    if q.local not in bindings:
        raise ExpansionError(f"unbound variable {q.local!r}")
    return bindings[q.local]


def _ident(q: QualifiedName, bindings: BindingSet, where: str) -> QualifiedName:
    if not q.is_variable:
        return q
    value = _lookup(q, bindings)
    if not isinstance(value, QualifiedName):
        raise ExpansionError(
            f"variable {q.local!r} is bound to a literal but used as {where}"
        )
    return value


def expand(template: Template, bindings: BindingSet) -> list[Statement]:
    """Replace every ``var:`` occurrence in ``template`` by its binding."""
    missing = sorted(template.variables - set(bindings))
    if missing:
        names = ", ".join(repr(m) for m in missing)
        raise ExpansionError(f"unbound variable {names} in template {template.name!r}")
    out: list[Statement] = []
    for st in template.body.statements:
        attrs = tuple(
            (k, _lookup(v, bindings) if isinstance(v, QualifiedName) and v.is_variable else v)
            for k, v in st.attributes
        )
        if isinstance(st, Element):
            out.append(replace(st, id=_ident(st.id, bindings, "an identifier"), attributes=attrs))
        else:
            ident = st.id if st.id.is_synthetic else _ident(st.id, bindings, "an identifier")
            fields = tuple((n, _ident(q, bindings, f"field {n}")) for n, q in st.fields)
            out.append(replace(st, id=ident, fields=fields, attributes=attrs))
    return out


def _merge_attributes(a, b):
    seen = {(k.iri, value_key(v)) for k, v in a}
    extra = tuple((k, v) for k, v in b if (k.iri, value_key(v)) not in seen)
    return a + extra


def merge_statements(statements: Iterable[Statement]) -> tuple[Statement, ...]:
    """Merge duplicate statements and renumber synthetic relation ids.

    Elements sharing kind and id are merged (attribute union).  Relations with
    synthetic ids are merged when their content is identical; relations with
    explicit ids must agree exactly.
    """
    merged: list[Statement] = []
    position: dict[str, int] = {}
    content_seen: set[tuple] = set()
    for st in statements:
        if isinstance(st, Relation) and st.id.is_synthetic:
            key = st.content_key()
            if key in content_seen:
                continue
            content_seen.add(key)
            merged.append(st)
            continue
        pos = position.get(st.id.iri)
        if pos is None:
            position[st.id.iri] = len(merged)
            merged.append(st)
            continue
        old = merged[pos]
        if old == st:
            continue
        if isinstance(old, Element) and isinstance(st, Element) and old.kind is st.kind:
            if (old.start and st.start and old.start != st.start) or (
                old.end and st.end and old.end != st.end
            ):
                raise ExpansionError(f"conflicting times for activity {st.id}")
            merged[pos] = replace(
                old,
                attributes=_merge_attributes(old.attributes, st.attributes),
                start=old.start or st.start,
                end=old.end or st.end,
            )
            continue
        raise ExpansionError(f"conflicting statements share id {st.id}")
    counter = 0
    for i, st in enumerate(merged):
        if isinstance(st, Relation) and st.id.is_synthetic:
            counter += 1
            merged[i] = replace(st, id=synthetic_id(counter))
    return tuple(merged)


def _namespaces_for(statements: Iterable[Statement], base: Mapping[str, str]) -> dict[str, str]:
    ns = dict(base)
    for q in ProvDocument({}, tuple(statements)).qualified_names():
        if q.is_synthetic or q.prefix in DEFAULT_NAMESPACES:
            continue
        known = ns.get(q.prefix)
        if known is None:
            ns[q.prefix] = q.namespace
        elif known != q.namespace:
            raise ExpansionError(f"prefix {q.prefix!r} bound to both <{known}> and <{q.namespace}>")
    return ns


def merge_documents(*docs: ProvDocument) -> ProvDocument:
    statements = merge_statements(st for d in docs for st in d.statements)
    base: dict[str, str] = {}
    for d in docs:
        base.update(d.namespaces)
    return ProvDocument(_namespaces_for(statements, base), statements)


def expand_decision(
    templates: Mapping[str, Template] | Iterable[Template],
    table: BindingsTable,
    namespaces: Mapping[str, str] | None = None,
) -> ProvDocument:
    """Expand every ``(template, instance)`` group and merge the results."""
    if not isinstance(templates, Mapping):
        templates = {t.name: t for t in templates}
    statements: list[Statement] = []
    base: dict[str, str] = {}
    for t in templates.values():
        base.update(t.namespaces)
    base.update({p: ns for p, ns in (namespaces or {}).items() if ns != VAR_NS})
    for (name, instance), bindings in table.groups().items():
        template = templates.get(name)
        if template is None:
            raise ExpansionError(f"unknown template {name!r}")
        try:
            statements.extend(expand(template, bindings))
        except ExpansionError as exc:
            raise ExpansionError(f"template {name!r}, instance {instance!r}: {exc}") from None
    merged = merge_statements(statements)
    return ProvDocument(_namespaces_for(merged, base), merged)
