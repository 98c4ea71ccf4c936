"""JSON reader for explanation plans and dictionaries."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..errors import DictionaryError, PlanError
from ..prov.model import DEFAULT_NAMESPACES
from .nodes import (
    LIST_SLOTS,
    TENSES,
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
    dict_refs,
)

FUNCTIONS = ("lookup-type", "noun+localname")

_TYPE_ALIASES = {"@iterator": "iterator", "@funcall": "funcall"}

_ALLOWED = {
    "clause": {"verb", "subject", "object", "indirect_object", "complementiser", "features"},
    "noun_phrase": {"head", "specifier", "pre_modifiers", "post_modifiers", "plural", "@iterator"},
    "coordinated_phrase": {"conjunction", "coordinates", "@iterator"},
    "adjective_phrase": {"head"},
    "literal": {"text"},
    "iterator": {"@variable", "@clause", "@element"},
    "funcall": {"@object", "@property", "@field", "@function", "@arg1", "@arg2", "post_modifiers"},
    "features": {"tense", "passive"},
}


def normalize_key(key: str) -> str:
    return key if key.startswith("@") else key.replace("-", "_")


def dict_key(word: str) -> str:
    """``##borrower-possessive`` and ``#borrower-possessive`` name the same entry."""
    return word.lstrip("#")


def _word(value: Any, where: str) -> Phrase:
    if not isinstance(value, str):
        raise PlanError(f"{where}: expected a string")
    if value.startswith("#"):
        key = dict_key(value)
        if not key:
            raise PlanError(f"{where}: empty dictionary reference")
        return DictRef(key)
    return value


def _bool(value: Any, where: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false"):
        return value.lower() == "true"
    raise PlanError(f"{where}: expected a boolean, found {value!r}")


def _phrase(value: Any, where: str) -> Phrase:
    if isinstance(value, dict):
        return parse_node(value, where)
    return _word(value, where)


def _phrases(value: Any, where: str) -> tuple[Phrase, ...]:
    if not isinstance(value, list):
        value = [value]
    return tuple(_phrase(v, f"{where}[{i}]") for i, v in enumerate(value))


def _opt(obj: dict, key: str, where: str) -> Phrase | None:
    return _phrase(obj[key], f"{where}.{key}") if key in obj else None


def _opt_str(obj: dict, key: str, where: str) -> str | None:
    value = obj.get(key)
    if value is not None and not isinstance(value, str):
        raise PlanError(f"{where}.{key}: expected a string")
    return value


def _iterator(obj: dict, owner: type, where: str) -> IteratorNode | None:
    if "@iterator" not in obj:
        return None
    it = parse_node(obj["@iterator"], f"{where}.@iterator")
    if not isinstance(it, IteratorNode):
        raise PlanError(f"{where}.@iterator: expected an iterator node")
    slots = LIST_SLOTS[owner]
    slot = it.target_slot or slots[0]
    if slot not in slots:
        raise PlanError(f"{where}.@iterator: cannot fill slot {slot!r} (expected one of {slots})")
    return IteratorNode(it.variable, slot, it.element)


def parse_node(obj: Any, where: str = "$") -> Phrase:
    if not isinstance(obj, dict):
        return _word(obj, where)
    if "type" not in obj:
        raise PlanError(f"{where}: node without a 'type'")
    kind = _TYPE_ALIASES.get(obj["type"], obj["type"])
    if kind not in _ALLOWED:
        raise PlanError(f"{where}: unknown node type {obj['type']!r}")
    obj = {normalize_key(k): v for k, v in obj.items() if k != "type"}
    unknown = set(obj) - _ALLOWED[kind]
    if unknown:
        raise PlanError(f"{where}: unknown key(s) {sorted(unknown)} for {kind}")

    if kind == "clause":
        features = None
        if "features" in obj:
            raw = obj["features"]
            if isinstance(raw, dict):
                features = parse_node({"type": "features", **raw}, f"{where}.features")
            if not isinstance(features, Features):
                raise PlanError(f"{where}.features: expected a features node")
        return Clause(
            verb=_opt_str(obj, "verb", where),
            subject=_opt(obj, "subject", where),
            object=_opt(obj, "object", where),
            indirect_object=_opt(obj, "indirect_object", where),
            complementiser=_opt_str(obj, "complementiser", where),
            features=features,
        )
    if kind == "noun_phrase":
        if "head" not in obj:
            raise PlanError(f"{where}: noun_phrase without a head")
        return NounPhrase(
            head=_phrase(obj["head"], f"{where}.head"),
            specifier=_opt(obj, "specifier", where),
            pre_modifiers=_phrases(obj.get("pre_modifiers", []), f"{where}.pre_modifiers"),
            post_modifiers=_phrases(obj.get("post_modifiers", []), f"{where}.post_modifiers"),
            plural=_bool(obj.get("plural", False), f"{where}.plural"),
            iterator=_iterator(obj, NounPhrase, where),
        )
    if kind == "coordinated_phrase":
        return CoordinatedPhrase(
            conjunction=_opt_str(obj, "conjunction", where) or "and",
            coordinates=_phrases(obj.get("coordinates", []), f"{where}.coordinates"),
            iterator=_iterator(obj, CoordinatedPhrase, where),
        )
    if kind == "adjective_phrase":
        if "head" not in obj:
            raise PlanError(f"{where}: adjective_phrase without a head")
        return AdjectivePhrase(_phrase(obj["head"], f"{where}.head"))
    if kind == "literal":
        text = _opt_str(obj, "text", where)
        if text is None:
            raise PlanError(f"{where}: literal without text")
        return Literal(text)
    if kind == "iterator":
        for key in ("@variable", "@element"):
            if key not in obj:
                raise PlanError(f"{where}: iterator without {key}")
        return IteratorNode(
            variable=_opt_str(obj, "@variable", where),
            target_slot=_opt_str(obj, "@clause", where) or "",
            element=_phrase(obj["@element"], f"{where}.@element"),
        )
    if kind == "funcall":
        function = _opt_str(obj, "@function", where)
        if function not in FUNCTIONS:
            raise PlanError(f"{where}: unknown function {function!r}")
        if "@object" not in obj:
            raise PlanError(f"{where}: function call without @object")
        call = FunCall(
            function=function,
            object=_opt_str(obj, "@object", where),
            property=_opt_str(obj, "@property", where),
            field=_opt_str(obj, "@field", where),
            arg1=_opt_str(obj, "@arg1", where),
            arg2=_opt_str(obj, "@arg2", where),
            post_modifiers=_phrases(obj.get("post_modifiers", []), f"{where}.post_modifiers"),
        )
        if function == "lookup-type" and (call.property is None or call.arg2 is None):
            raise PlanError(f"{where}: lookup-type needs @property and @arg2 (dictionary section)")
        if function == "noun+localname" and call.field is None:
            raise PlanError(f"{where}: noun+localname needs @field")
        return call
    # features
    tense = obj.get("tense", "present")
    if tense not in TENSES:
        raise PlanError(f"{where}: unknown tense {tense!r}")
    return Features(tense=tense, passive=_bool(obj.get("passive", False), f"{where}.passive"))


def parse_plan(json_text: str) -> Phrase:
    try:
        data = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise PlanError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_node(data)


@dataclass(frozen=True)
class Dictionary:
    """Lexicon keyed by provenance type (sections) and by audience (profiles).

    ``sections`` maps a section name to ``{iri: (qualified name, phrase)}``.
    """

    sections: Mapping[str, Mapping[str, tuple[str, Phrase]]] = field(default_factory=dict)
    profiles: Mapping[str, Mapping[str, Phrase]] = field(default_factory=dict)
    namespaces: Mapping[str, str] = field(default_factory=dict)

    def expand(self, qname: str) -> str:
        prefix, sep, local = qname.partition(":")
        ns = {**DEFAULT_NAMESPACES, **self.namespaces}
        if not sep or prefix not in ns:
            raise DictionaryError(f"cannot expand {qname!r}: undeclared prefix {prefix!r}")
        return ns[prefix] + local

    def term_count(self) -> int:
        keys = {k for entries in self.profiles.values() for k in entries}
        return sum(len(s) for s in self.sections.values()) + len(keys)

    def referenced_keys(self) -> list[tuple[str, str]]:
        """``(location, key)`` for every dictionary reference inside entries."""
        out = []
        for name, entries in self.sections.items():
            for _, (qname, phrase) in entries.items():
                out += [(f"sections.{name}.{qname}", k) for k in dict_refs(phrase)]
        for name, entries in self.profiles.items():
            for key, phrase in entries.items():
                out += [(f"profiles.{name}.{key}", k) for k in dict_refs(phrase)]
        return out


def load_dictionary(
    data: str | Mapping, namespaces: Mapping[str, str] | None = None, *, strict: bool = True
) -> Dictionary:
    """Parse a dictionary; ``strict`` enforces identical key sets across profiles."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DictionaryError(
                f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    if not isinstance(data, dict):
        raise DictionaryError("dictionary must be a JSON object")
    unknown = set(data) - {"prefixes", "sections", "profiles"}
    if unknown:
        raise DictionaryError(f"unknown top-level key(s) {sorted(unknown)}")
    ns = {**(namespaces or {}), **data.get("prefixes", {})}
    probe = Dictionary(namespaces=ns)
    sections: dict[str, dict[str, tuple[str, Phrase]]] = {}
    try:
        for name, entries in data.get("sections", {}).items():
            section = {}
            for qname, spec in entries.items():
                section[probe.expand(qname)] = (qname, parse_node(spec, f"sections.{name}.{qname}"))
            sections[name] = section
        profiles = {
            name: {dict_key(k): parse_node(v, f"profiles.{name}.{k}") for k, v in entries.items()}
            for name, entries in data.get("profiles", {}).items()
        }
    except PlanError as exc:
        raise DictionaryError(str(exc)) from None
    key_sets = {name: set(entries) for name, entries in profiles.items()}
    if strict and key_sets:
        union = set().union(*key_sets.values())
        for name, keys in key_sets.items():
            if keys != union:
                raise DictionaryError(
                    f"profile {name!r} is missing key(s) {sorted(union - keys)}"
                )
    return Dictionary(sections, profiles, ns)
