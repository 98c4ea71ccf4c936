"""PROV data model types.

Only the subset needed for decision provenance is modelled: the three element
kinds (entity, activity, agent) and seven binary relations.  Everything is
immutable; documents can be shared freely between threads.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

PROV_NS = "http://www.w3.org/ns/prov#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
VAR_NS = "http://openprovenance.org/var#"
PROVEXT_NS = "http://openprovenance.org/ns/provext#"

#: Prefixes every document and query may use without declaring them.
DEFAULT_NAMESPACES: dict[str, str] = {"prov": PROV_NS, "xsd": XSD_NS}

SYNTHETIC_PREFIX = "_"


@dataclass(frozen=True)
class QualifiedName:
    prefix: str
    local: str
    iri: str

    def __str__(self) -> str:
        return f"{self.prefix}:{self.local}"

    @property
    def namespace(self) -> str:
        return self.iri[: len(self.iri) - len(self.local)]

    @property
    def is_synthetic(self) -> bool:
        return self.prefix == SYNTHETIC_PREFIX

    @property
    def is_variable(self) -> bool:
        return self.namespace == VAR_NS

    @classmethod
    def make(cls, prefix: str, local: str, namespaces: Mapping[str, str]) -> QualifiedName:
        from ..errors import UndeclaredPrefixError

        ns = namespaces.get(prefix, DEFAULT_NAMESPACES.get(prefix))
        if ns is None:
            raise UndeclaredPrefixError(f"undeclared prefix {prefix!r} in {prefix}:{local}")
        return cls(prefix, local, ns + local)


def synthetic_id(n: int) -> QualifiedName:
    return QualifiedName(SYNTHETIC_PREFIX, f"r{n}", f"_:r{n}")


def parse_qname(text: str, namespaces: Mapping[str, str]) -> QualifiedName:
    prefix, sep, local = text.partition(":")
    if not sep:
        from ..errors import ProvError

        raise ProvError(f"not a qualified name: {text!r}")
    return QualifiedName.make(prefix, local, namespaces)


@dataclass(frozen=True)
class StringLiteral:
    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TypedLiteral:
    lexical: str
    datatype: QualifiedName

    def __post_init__(self) -> None:
        if self.datatype.iri == XSD_NS + "dateTime":
            parse_timestamp(self.lexical)

    def __str__(self) -> str:
        return self.lexical


AttributeValue = Union[QualifiedName, StringLiteral, TypedLiteral]


def value_key(value: AttributeValue) -> tuple:
    """Comparison key for attribute values; qualified names compare by IRI."""
    if isinstance(value, QualifiedName):
        return ("qn", value.iri)
    if isinstance(value, TypedLiteral):
        return ("typed", value.lexical, value.datatype.iri)
    return ("str", value.value)


def parse_timestamp(text: str) -> _dt.datetime:
    from ..errors import ProvError

    try:
        return _dt.datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise ProvError(f"not an ISO-8601 timestamp: {text!r}") from None


class Kind(Enum):
    """Statement kinds with their PROV-N keyword and field catalog."""

    ENTITY = ("entity", "Entity", ())
    ACTIVITY = ("activity", "Activity", ())
    AGENT = ("agent", "Agent", ())
    WAS_GENERATED_BY = ("wasGeneratedBy", "WasGeneratedBy", ("entity", "activity"))
    USED = ("used", "Used", ("activity", "entity"))
    WAS_ATTRIBUTED_TO = ("wasAttributedTo", "WasAttributedTo", ("entity", "agent"))
    WAS_ASSOCIATED_WITH = ("wasAssociatedWith", "WasAssociatedWith", ("activity", "agent"))
    ACTED_ON_BEHALF_OF = ("actedOnBehalfOf", "ActedOnBehalfOf", ("delegate", "responsible"))
    WAS_DERIVED_FROM = ("wasDerivedFrom", "WasDerivedFrom", ("generatedEntity", "usedEntity"))
    WAS_INFORMED_BY = ("wasInformedBy", "WasInformedBy", ("informed", "informant"))
    # virtual, produced by the query engine only
    WAS_DERIVED_FROM_STAR = ("", "WasDerivedFromStar", ("generatedEntity", "usedEntity"))

    def __init__(self, keyword: str, type_name: str, fields: tuple[str, ...]) -> None:
        self.keyword = keyword
        self.type_name = type_name
        self.fields = fields

    @property
    def is_element(self) -> bool:
        return not self.fields

    @property
    def has_time(self) -> bool:
        return self in (Kind.WAS_GENERATED_BY, Kind.USED)

    @property
    def type_iri(self) -> str:
        ns = PROVEXT_NS if self is Kind.WAS_DERIVED_FROM_STAR else PROV_NS
        return ns + self.type_name


ELEMENT_KINDS = tuple(k for k in Kind if k.is_element)
RELATION_KINDS = tuple(k for k in Kind if not k.is_element and k.keyword)
KIND_BY_KEYWORD = {k.keyword: k for k in Kind if k.keyword}
KIND_BY_TYPE_IRI = {k.type_iri: k for k in Kind}

Attributes = tuple[tuple[QualifiedName, AttributeValue], ...]


class _HasAttributes:
    attributes: Attributes

    def values(self, key: QualifiedName | str) -> list[AttributeValue]:
        """All values of attribute ``key`` (matched by expanded IRI)."""
        iri = key if isinstance(key, str) else key.iri
        return [v for k, v in self.attributes if k.iri == iri]


@dataclass(frozen=True)
class Element(_HasAttributes):
    kind: Kind
    id: QualifiedName
    attributes: Attributes = ()
    start: str | None = None
    end: str | None = None

    def __post_init__(self) -> None:
        if not self.kind.is_element:
            raise ValueError(f"{self.kind.type_name} is not an element kind")
        if (self.start or self.end) and self.kind is not Kind.ACTIVITY:
            raise ValueError("only activities carry start/end times")
        for t in (self.start, self.end):
            if t is not None:
                parse_timestamp(t)


@dataclass(frozen=True)
class Relation(_HasAttributes):
    kind: Kind
    id: QualifiedName
    fields: tuple[tuple[str, QualifiedName], ...]
    time: str | None = None
    attributes: Attributes = ()

    def __post_init__(self) -> None:
        if self.kind.is_element:
            raise ValueError(f"{self.kind.type_name} is not a relation kind")
        if tuple(name for name, _ in self.fields) != self.kind.fields:
            raise ValueError(f"{self.kind.type_name} takes fields {self.kind.fields}")
        if self.time is not None:
            if not self.kind.has_time:
                raise ValueError(f"{self.kind.type_name} carries no time")
            parse_timestamp(self.time)

    def field(self, name: str) -> QualifiedName:
        for key, value in self.fields:
            if key == name:
                return value
        raise KeyError(name)

    def content_key(self) -> tuple:
        """Everything but the id; used to merge relations with synthetic ids."""
        return (
            self.kind,
            tuple((n, q.iri) for n, q in self.fields),
            self.time,
            tuple((k.iri, value_key(v)) for k, v in self.attributes),
        )


Statement = Union[Element, Relation]


@dataclass(frozen=True)
class ProvDocument:
    namespaces: Mapping[str, str] = field(default_factory=dict)
    statements: tuple[Statement, ...] = ()

    def __post_init__(self) -> None:
        from ..errors import DuplicateIdError

        seen: set[str] = set()
        for st in self.statements:
            if st.id.iri in seen:
                raise DuplicateIdError(f"duplicate id {st.id}")
            seen.add(st.id.iri)

    def __iter__(self) -> Iterator[Statement]:
        return iter(self.statements)

    def __len__(self) -> int:
        return len(self.statements)

    @cached_property
    def _by_iri(self) -> dict[str, Statement]:
        return {st.id.iri: st for st in self.statements}

    def get(self, ident: QualifiedName | str) -> Statement | None:
        iri = ident if isinstance(ident, str) else ident.iri
        return self._by_iri.get(iri)

    def __contains__(self, ident: object) -> bool:
        if isinstance(ident, (str, QualifiedName)):
            return self.get(ident) is not None
        return False

    @property
    def elements(self) -> list[Element]:
        return [st for st in self.statements if isinstance(st, Element)]

    @property
    def relations(self) -> list[Relation]:
        return [st for st in self.statements if isinstance(st, Relation)]

    def of_kind(self, kind: Kind) -> list[Statement]:
        return [st for st in self.statements if st.kind is kind]

    def qualified_names(self) -> Iterable[QualifiedName]:
        for st in self.statements:
            yield st.id
            if isinstance(st, Relation):
                for _, q in st.fields:
                    yield q
            for k, v in st.attributes:
                yield k
                if isinstance(v, QualifiedName):
                    yield v
                elif isinstance(v, TypedLiteral):
                    yield v.datatype

    def compact(self, iri: str) -> QualifiedName | None:
        """Best qualified name for ``iri`` using this document's prefixes."""
        best = None
        for prefix, ns in {**DEFAULT_NAMESPACES, **self.namespaces}.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(best[1])):
                best = (prefix, ns)
        if best is None:
            return None
        return QualifiedName(best[0], iri[len(best[1]):], iri)
