"""Instantiation of plans against one query result row and a profile."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping

from ..errors import InstantiationError
from ..prov.model import DEFAULT_NAMESPACES, QualifiedName
from ..query.evaluate import RecordRef, Seq
from .nodes import (
    AdjectivePhrase,
    Clause,
    CoordinatedPhrase,
    DictRef,
    Features,
    FunCall,
    IteratorNode,
    Literal,
    NounPhrase,
    Phrase,
)
from .parse import Dictionary

MAX_DICT_DEPTH = 8

CATEGORIES = ("noun_phrase", "adjective_phrase", "literal")


def _coerce(phrase: Phrase, category: str | None) -> Phrase:
    if category is None:
        return phrase
    if category == "noun_phrase":
        return phrase if isinstance(phrase, NounPhrase) else NounPhrase(head=phrase)
    if category == "adjective_phrase":
        return phrase if isinstance(phrase, AdjectivePhrase) else AdjectivePhrase(head=phrase)
    if category == "literal":
        if isinstance(phrase, str):
            return Literal(phrase)
        if isinstance(phrase, Literal):
            return phrase
    raise InstantiationError(f"cannot coerce {type(phrase).__name__} to {category!r}")


def fn_lookup_type(
    record: RecordRef,
    property: QualifiedName | str,
    category: str | None,
    section: str,
    dictionary: Dictionary,
) -> Phrase:
    """Dictionary phrase for the record's type.

    Among the record's ``property`` values that have an entry in ``section``,
    the one with the lexicographically smallest IRI wins.
    """
    entries = dictionary.sections.get(section)
    if entries is None:
        raise InstantiationError(f"unknown dictionary section {section!r}")
    values = [v for v in record.values(property) if isinstance(v, QualifiedName)]
    known = sorted({v.iri for v in values} & set(entries))
    if not known:
        types = ", ".join(str(v) for v in record.values(property)) or "none"
        raise InstantiationError(
            f"no entry in section {section!r} for record {record.id} (types: {types})"
        )
    return _coerce(entries[known[0]][1], category)


def fn_noun_localname(record: RecordRef, field: str, format: str = "text") -> Literal:
    """The record identifier's local part, in parentheses (a link in HTML)."""
    if field != "id":
        raise InstantiationError(f"noun+localname does not support field {field!r}")
    ident = record.id
    if format == "html":
        return Literal(ident.local, href=ident.iri, parenthesized=True)
    return Literal(ident.local, parenthesized=True)


class _Instantiator:
    def __init__(
        self,
        row: Mapping[str, RecordRef | Seq],
        dictionary: Dictionary,
        profile: str,
        format: str,
        namespaces: Mapping[str, str],
    ) -> None:
        if profile not in dictionary.profiles:
            raise InstantiationError(f"unknown profile {profile!r}")
        self.row = row
        self.dictionary = dictionary
        self.entries = dictionary.profiles[profile]
        self.format = format
        self.namespaces = {**DEFAULT_NAMESPACES, **dictionary.namespaces, **namespaces}

    def binding(self, name: str, env: Mapping[str, RecordRef]):
        if name in env:
            return env[name]
        if name not in self.row:
            raise InstantiationError(f"variable {name!r} is not bound by the query")
        return self.row[name]

    def record(self, name: str, env) -> RecordRef:
        value = self.binding(name, env)
        if isinstance(value, Seq):
            raise InstantiationError(f"variable {name!r} is an aggregate; iterate over it first")
        return value

    def phrase(self, node: Phrase, env, depth: int = 0) -> Phrase:
        if node is None or isinstance(node, (str, Literal, Features)):
            return node
        if isinstance(node, DictRef):
            if depth >= MAX_DICT_DEPTH:
                raise InstantiationError(
                    f"dictionary reference {node.key!r} nested deeper than {MAX_DICT_DEPTH} (cycle?)"
                )
            if node.key not in self.entries:
                raise InstantiationError(f"unresolvable dictionary reference {node.key!r}")
            return self.phrase(self.entries[node.key], env, depth + 1)
        if isinstance(node, FunCall):
            return self.call(node, env, depth)
        if isinstance(node, IteratorNode):
            raise InstantiationError("iterator outside a list slot")
        if isinstance(node, Clause):
            return replace(
                node,
                subject=self.phrase(node.subject, env, depth),
                object=self.phrase(node.object, env, depth),
                indirect_object=self.phrase(node.indirect_object, env, depth),
            )
        if isinstance(node, NounPhrase):
            node = self.iterate(node, env, depth)
            return replace(
                node,
                head=self.phrase(node.head, env, depth),
                specifier=self.phrase(node.specifier, env, depth),
                pre_modifiers=self.many(node.pre_modifiers, env, depth),
                post_modifiers=self.many(node.post_modifiers, env, depth),
            )
        if isinstance(node, CoordinatedPhrase):
            node = self.iterate(node, env, depth)
            return replace(node, coordinates=self.many(node.coordinates, env, depth))
        if isinstance(node, AdjectivePhrase):
            return AdjectivePhrase(self.phrase(node.head, env, depth))
        raise InstantiationError(f"unexpected node {type(node).__name__}")

    def many(self, nodes, env, depth) -> tuple:
        return tuple(self.phrase(n, env, depth) for n in nodes)

    def iterate(self, node, env, depth):
        """Expand the node's iterator into its target slot (already instantiated)."""
        it = node.iterator
        if it is None:
            return node
        items = self.binding(it.variable, env)
        if isinstance(items, RecordRef):
            raise InstantiationError(f"iterator over {it.variable!r} expects an aggregate (Seq)")
        if not items:
            raise InstantiationError(f"empty aggregate {it.variable!r} under an iterator")
        expanded = tuple(
            self.phrase(it.element, {**env, it.variable: item}, depth) for item in items
        )
        slot = getattr(node, it.target_slot)
        # expanded items are resolved already; re-resolving them is a no-op
        return replace(node, iterator=None, **{it.target_slot: slot + expanded})

    def call(self, call: FunCall, env, depth) -> Phrase:
        record = self.record(call.object, env)
        if call.function == "lookup-type":
            prop = QualifiedName.make(*call.property.partition(":")[::2], self.namespaces)
            result = fn_lookup_type(record, prop, call.arg1, call.arg2, self.dictionary)
        else:
            result = fn_noun_localname(record, call.field, self.format)
        if call.post_modifiers:
            if not isinstance(result, NounPhrase):
                result = NounPhrase(head=result)
            result = replace(result, post_modifiers=result.post_modifiers + call.post_modifiers)
        return self.phrase(result, env, depth)


def instantiate(
    plan: Phrase,
    row: Mapping[str, RecordRef | Seq],
    dictionary: Dictionary,
    profile: str,
    *,
    format: str = "text",
    namespaces: Mapping[str, str] | None = None,
) -> Phrase:
    """Resolve iterators, function calls and dictionary references in ``plan``."""
    return _Instantiator(row, dictionary, profile, format, namespaces or {}).phrase(plan, {})
