from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..prov.model import AttributeValue, Kind, QualifiedName


@dataclass(frozen=True)
class Join:
    left_var: str
    left_field: str
    right_var: str
    right_field: str

    def __str__(self) -> str:
        return f"{self.left_var}.{self.left_field} = {self.right_var}.{self.right_field}"


@dataclass(frozen=True)
class FromClause:
    var: str
    record_type: QualifiedName
    joins: tuple[Join, ...] = ()

    @property
    def kind(self) -> Kind:
        from ..prov.model import KIND_BY_TYPE_IRI

        return KIND_BY_TYPE_IRI[self.record_type.iri]


@dataclass(frozen=True)
class Filter:
    var: str
    attribute: QualifiedName
    literal: AttributeValue
    op: str = "contains"


@dataclass(frozen=True)
class GroupBy:
    group_var: str
    agg_var: str
    agg_kind: str = "Seq"


@dataclass(frozen=True)
class QueryAst:
    prefixes: Mapping[str, str] = field(default_factory=dict)
    from_clauses: tuple[FromClause, ...] = ()
    filters: tuple[Filter, ...] = ()
    group_by: GroupBy | None = None

    @property
    def variables(self) -> list[str]:
        return [c.var for c in self.from_clauses]

    @property
    def joins(self) -> list[Join]:
        return [j for c in self.from_clauses for j in c.joins]


def fields_for(kind: Kind) -> tuple[str, ...]:
    """Fields a query may reference on a record of ``kind``."""
    return ("id",) + kind.fields


def query_cost(ast: QueryAst) -> dict[str, int]:
    return {"joins": len(ast.joins), "filters": len(ast.filters)}
