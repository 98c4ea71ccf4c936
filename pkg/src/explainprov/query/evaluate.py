"""Query evaluation by nested loops over document records."""

from __future__ import annotations

from collections import OrderedDict, defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Union

from ..errors import QueryError
from ..prov.model import (
    AttributeValue,
    Element,
    Kind,
    ProvDocument,
    QualifiedName,
    Relation,
    Statement,
    value_key,
)
from .ast import Filter, Join, QueryAst, fields_for


@dataclass(frozen=True, eq=False)
class RecordRef:
    """Read-only handle on an element or relation bound by a query."""

    statement: Statement

    @property
    def id(self) -> QualifiedName:
        return self.statement.id

    @property
    def kind(self) -> Kind:
        return self.statement.kind

    @property
    def attributes(self):
        return self.statement.attributes

    @property
    def time(self) -> str | None:
        return getattr(self.statement, "time", None)

    @property
    def fields(self) -> dict[str, QualifiedName]:
        st = self.statement
        return dict(st.fields) if isinstance(st, Relation) else {}

    def field(self, name: str) -> QualifiedName:
        if name == "id":
            return self.statement.id
        if name not in self.kind.fields:
            raise QueryError(f"field {name!r} is invalid for {self.kind.type_name}")
        return self.statement.field(name)

    def values(self, attribute: QualifiedName | str) -> list[AttributeValue]:
        return self.statement.values(attribute)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RecordRef) and other.id.iri == self.id.iri

    def __hash__(self) -> int:
        return hash(self.id.iri)

    def __repr__(self) -> str:
        return f"RecordRef({self.id})"


class Seq(tuple):
    """Aggregated records, unique by id, in encounter order."""

    def __repr__(self) -> str:
        return f"Seq({list(self)!r})"


Binding = Union[RecordRef, Seq]


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[dict[str, Binding]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[dict[str, Binding]]:
        return iter(self.rows)

    def to_json(self) -> dict[str, Any]:
        def cell(value: Binding) -> Any:
            if isinstance(value, Seq):
                return [str(r.id) for r in value]
            return str(value.id)

        return {
            "columns": list(self.columns),
            "rows": [{c: cell(row[c]) for c in self.columns} for row in self.rows],
        }


def star_id(g: QualifiedName, u: QualifiedName) -> QualifiedName:
    return QualifiedName("star", f"{g}->{u}", f"star:{g.iri}->{u.iri}")


def derivation_star(doc: ProvDocument) -> list[Relation]:
    """Transitive closure of ``wasDerivedFrom`` as virtual relations.

    Sources are visited in order of first appearance in a derivation; each
    source's reachable entities are listed in breadth-first order, with
    neighbours in document order.  A pair ``(g, g)`` appears only when ``g``
    lies on a derivation cycle.
    """
    adjacency: dict[str, list[QualifiedName]] = OrderedDict()
    names: dict[str, QualifiedName] = {}
    for rel in doc.of_kind(Kind.WAS_DERIVED_FROM):
        g, u = rel.field("generatedEntity"), rel.field("usedEntity")
        names.setdefault(g.iri, g)
        names.setdefault(u.iri, u)
        targets = adjacency.setdefault(g.iri, [])
        if all(t.iri != u.iri for t in targets):
            targets.append(names[u.iri])

    out: list[Relation] = []
    for g_iri, first in adjacency.items():
        g = names[g_iri]
        seen: set[str] = set()
        queue = deque(first)
        while queue:
            u = queue.popleft()
            if u.iri in seen:
                continue
            seen.add(u.iri)
            out.append(
                Relation(
                    Kind.WAS_DERIVED_FROM_STAR,
                    star_id(g, u),
                    (("generatedEntity", g), ("usedEntity", u)),
                )
            )
            queue.extend(adjacency.get(u.iri, ()))
    return out


def candidates(doc: ProvDocument, kind: Kind, star: list[Relation] | None = None) -> list[RecordRef]:
    if kind is Kind.WAS_DERIVED_FROM_STAR:
        return [RecordRef(r) for r in (star if star is not None else derivation_star(doc))]
    return [RecordRef(st) for st in doc.statements if st.kind is kind]


def filter_holds(record: RecordRef, flt: Filter) -> bool:
    """Containment: the attribute's values include the literal."""
    want = value_key(flt.literal)
    return any(value_key(v) == want for v in record.values(flt.attribute))


def join_holds(env: Mapping[str, RecordRef], join: Join) -> bool:
    left = env[join.left_var].field(join.left_field)
    right = env[join.right_var].field(join.right_field)
    return left.iri == right.iri


def _check_fields(ast: QueryAst) -> None:
    kinds = {c.var: c.kind for c in ast.from_clauses}
    for j in ast.joins:
        for var, name in ((j.left_var, j.left_field), (j.right_var, j.right_field)):
            if var not in kinds:
                raise QueryError(f"undeclared variable {var!r} in join {j}")
            if name not in fields_for(kinds[var]):
                raise QueryError(f"field {name!r} is invalid for {kinds[var].type_name} {var!r}")


def evaluate(ast: QueryAst, doc: ProvDocument) -> ResultTable:
    _check_fields(ast)
    clauses = ast.from_clauses
    star = derivation_star(doc) if any(c.kind is Kind.WAS_DERIVED_FROM_STAR for c in clauses) else None
    pools = [candidates(doc, c.kind, star) for c in clauses]

    # a join or filter is checked as soon as all of its variables are bound
    position = {c.var: i for i, c in enumerate(clauses)}
    joins_at: dict[int, list[Join]] = defaultdict(list)
    for j in ast.joins:
        joins_at[max(position[j.left_var], position[j.right_var])].append(j)
    filters_at: dict[int, list[Filter]] = defaultdict(list)
    for f in ast.filters:
        filters_at[position[f.var]].append(f)

    matches: list[dict[str, RecordRef]] = []
    env: dict[str, RecordRef] = {}

    def search(depth: int) -> None:
        if depth == len(clauses):
            matches.append(dict(env))
            return
        var = clauses[depth].var
        for record in pools[depth]:
            if not all(filter_holds(record, f) for f in filters_at[depth]):
                continue
            env[var] = record
            if all(join_holds(env, j) for j in joins_at[depth]):
                search(depth + 1)
        env.pop(var, None)

    search(0)
    columns = [c.var for c in clauses]
    if ast.group_by is None:
        return ResultTable(columns, list(matches))
    return ResultTable(columns, group_rows(matches, ast.group_by.group_var, ast.group_by.agg_var))


def group_rows(
    matches: list[dict[str, RecordRef]], group_var: str, agg_var: str
) -> list[dict[str, Binding]]:
    groups: OrderedDict[str, dict[str, Binding]] = OrderedDict()
    members: dict[str, OrderedDict[str, RecordRef]] = {}
    for row in matches:
        key = row[group_var].id.iri
        if key not in groups:
            groups[key] = dict(row)
            members[key] = OrderedDict()
        members[key].setdefault(row[agg_var].id.iri, row[agg_var])
    for key, row in groups.items():
        row[agg_var] = Seq(members[key].values())
    return list(groups.values())
