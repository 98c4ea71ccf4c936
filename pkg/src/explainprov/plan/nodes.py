"""Syntax-tree node types for explanation plans.

Slots hold either plain words (``str``) or nodes.  Words written with a leading
``##`` (or ``#``) in plan sources become :class:`DictRef` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator, Union

TENSES = ("present", "past", "future")


@dataclass(frozen=True)
class Literal:
    text: str
    href: str | None = None
    parenthesized: bool = False


@dataclass(frozen=True)
class DictRef:
    key: str


@dataclass(frozen=True)
class Features:
    tense: str = "present"
    passive: bool = False


@dataclass(frozen=True)
class IteratorNode:
    variable: str
    target_slot: str
    element: "Node"


@dataclass(frozen=True)
class FunCall:
    function: str
    object: str
    property: str | None = None
    field: str | None = None
    arg1: str | None = None
    arg2: str | None = None
    post_modifiers: tuple["Phrase", ...] = ()


@dataclass(frozen=True)
class NounPhrase:
    head: "Phrase"
    specifier: "Phrase | None" = None
    pre_modifiers: tuple["Phrase", ...] = ()
    post_modifiers: tuple["Phrase", ...] = ()
    plural: bool = False
    iterator: IteratorNode | None = None


@dataclass(frozen=True)
class AdjectivePhrase:
    head: "Phrase"


@dataclass(frozen=True)
class CoordinatedPhrase:
    conjunction: str = "and"
    coordinates: tuple["Phrase", ...] = ()
    iterator: IteratorNode | None = None


@dataclass(frozen=True)
class Clause:
    verb: str | None = None
    subject: "Phrase | None" = None
    object: "Phrase | None" = None
    indirect_object: "Phrase | None" = None
    complementiser: str | None = None
    features: Features | None = None


Node = Union[Clause, NounPhrase, CoordinatedPhrase, AdjectivePhrase, Literal, IteratorNode, FunCall, DictRef, Features]
Phrase = Union[str, Node]

NODE_TYPES = (Clause, NounPhrase, CoordinatedPhrase, AdjectivePhrase, Literal, IteratorNode, FunCall, DictRef, Features)

#: list-valued slots an iterator may fill, per node type
LIST_SLOTS = {
    CoordinatedPhrase: ("coordinates",),
    NounPhrase: ("pre_modifiers", "post_modifiers"),
}

DYNAMIC = (IteratorNode, FunCall, DictRef)


def children(node: Phrase) -> Iterator[Phrase]:
    """Direct sub-phrases of ``node``, in slot order."""
    if isinstance(node, str) or node is None:
        return
    for f in fields(node):
        value = getattr(node, f.name)
        if isinstance(value, tuple):
            yield from value
        elif isinstance(value, NODE_TYPES):
            yield value


def walk(node: Phrase) -> Iterator[Phrase]:
    yield node
    for child in children(node):
        yield from walk(child)


def plan_size(node: Phrase) -> int:
    """Structural node count; words and dictionary references are leaves."""
    if isinstance(node, (str, DictRef)) or node is None:
        return 0
    return 1 + sum(plan_size(c) for c in children(node))


def variable_references(node: Phrase) -> list[str]:
    """Query variable names referenced by iterators and function calls."""
    out = []
    for n in walk(node):
        if isinstance(n, IteratorNode):
            out.append(n.variable)
        elif isinstance(n, FunCall):
            out.append(n.object)
    return out


def dict_refs(node: Phrase) -> list[str]:
    return [n.key for n in walk(node) if isinstance(n, DictRef)]


def is_resolved(node: Phrase) -> bool:
    return not any(isinstance(n, DYNAMIC) for n in walk(node))
