"""A small English surface realizer for resolved plan trees.

Covers what explanation plans need: active and passive clauses in three
tenses, subject-verb agreement, noun phrases with specifiers and modifiers,
coordination and complementisers, in plain-text or HTML output.
"""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import RealizationError
from .plan.nodes import (
    AdjectivePhrase,
    Clause,
    CoordinatedPhrase,
    Features,
    Literal,
    NounPhrase,
    Phrase,
)

FORMATS = ("text", "html")
VOWELS = set("aeiou")
_PLURAL_PRONOUNS = {"we", "you", "they"}


@dataclass(frozen=True)
class Lexicon:
    verbs: dict
    plurals: dict


@lru_cache(maxsize=None)
def default_lexicon() -> Lexicon:
    data = json.loads(resources.files("explainprov.data").joinpath("lexicon.json").read_text("utf-8"))
    return Lexicon(data["verbs"], data["plurals"])


@dataclass(frozen=True)
class Sentence:
    text: str
    format: str = "text"

    def __str__(self) -> str:
        return self.text


def _regular_ed(verb: str) -> str:
    if verb.endswith("e"):
        return verb + "d"
    if len(verb) >= 2 and verb.endswith("y") and verb[-2] not in VOWELS:
        return verb[:-1] + "ied"
    return verb + "ed"


def past_participle(verb: str, lexicon: Lexicon | None = None) -> str:
    lexicon = lexicon or default_lexicon()
    if verb in lexicon.verbs:
        return lexicon.verbs[verb]["past_participle"]
    return _regular_ed(verb)


def past_tense(verb: str, lexicon: Lexicon | None = None) -> str:
    lexicon = lexicon or default_lexicon()
    if verb in lexicon.verbs:
        return lexicon.verbs[verb]["past"]
    return _regular_ed(verb)


def present_3sg(verb: str, lexicon: Lexicon | None = None) -> str:
    lexicon = lexicon or default_lexicon()
    if verb in lexicon.verbs:
        return lexicon.verbs[verb]["present_3sg"]
    if verb.endswith(("s", "x", "z", "ch", "sh", "o")):
        return verb + "es"
    if len(verb) >= 2 and verb.endswith("y") and verb[-2] not in VOWELS:
        return verb[:-1] + "ies"
    return verb + "s"


def be_form(tense: str, number: str, person: int = 3) -> str:
    if tense == "future":
        return "will be"
    plural = number == "plural"
    if tense == "past":
        return "were" if plural else "was"
    if tense == "present":
        if plural:
            return "are"
        return "am" if person == 1 else "is"
    raise RealizationError(f"unknown tense {tense!r}")


def pluralize(noun: str, lexicon: Lexicon | None = None) -> str:
    lexicon = lexicon or default_lexicon()
    words = noun.split(" ")
    last = words[-1]
    if last in lexicon.plurals:
        last = lexicon.plurals[last]
    elif last.endswith(("s", "x", "z", "ch", "sh")):
        last += "es"
    elif len(last) >= 2 and last.endswith("y") and last[-2] not in VOWELS:
        last = last[:-1] + "ies"
    else:
        last += "s"
    return " ".join(words[:-1] + [last])


def conjugate(verb: str, tense: str, number: str, person: int = 3, lexicon: Lexicon | None = None) -> str:
    """Finite form of ``verb``; only the first word of a phrasal verb inflects."""
    head, _, rest = verb.partition(" ")
    if head == "be":
        form = be_form(tense, number, person)
    elif tense == "future":
        form = "will " + head
    elif tense == "past":
        form = past_tense(head, lexicon)
    elif number == "singular" and person == 3:
        form = present_3sg(head, lexicon)
    else:
        form = head
    return f"{form} {rest}" if rest else form


def number_of(phrase: Phrase) -> tuple[str, int]:
    """Grammatical number and person of a surface subject (default: singular, 3rd)."""
    if isinstance(phrase, str):
        word = phrase.lower()
        if word == "i":
            return "singular", 1
        if word in _PLURAL_PRONOUNS:
            return "plural", 2 if word == "you" else 3
        return "singular", 3
    if isinstance(phrase, NounPhrase):
        return ("plural" if phrase.plural else "singular"), 3
    if isinstance(phrase, CoordinatedPhrase):
        if len(phrase.coordinates) >= 2 and phrase.conjunction == "and":
            return "plural", 3
        if phrase.coordinates:
            return number_of(phrase.coordinates[-1])
    return "singular", 3


class _Renderer:
    def __init__(self, format: str, lexicon: Lexicon) -> None:
        if format not in FORMATS:
            raise RealizationError(f"unknown format {format!r}")
        self.html = format == "html"
        self.lexicon = lexicon

    def word(self, text: str) -> str:
        text = text.replace("_", " ")
        return html.escape(text, quote=False) if self.html else text

    def join(self, *parts: str | None) -> str:
        return " ".join(p for p in parts if p)

    def render(self, node: Phrase | None) -> str:
        if node is None:
            return ""
        if isinstance(node, str):
            return self.word(node)
        if isinstance(node, Literal):
            text = html.escape(node.text, quote=False) if self.html else node.text
            if self.html and node.href:
                text = f'<a href="{html.escape(node.href, quote=True)}">{text}</a>'
            return f"({text})" if node.parenthesized else text
        if isinstance(node, NounPhrase):
            head = node.head
            if node.plural and isinstance(head, str):
                head = pluralize(head.replace("_", " "), self.lexicon)
            return self.join(
                self.render(node.specifier),
                *(self.render(m) for m in node.pre_modifiers),
                self.render(head),
                *(self.render(m) for m in node.post_modifiers),
            )
        if isinstance(node, AdjectivePhrase):
            return self.render(node.head)
        if isinstance(node, CoordinatedPhrase):
            items = [s for s in (self.render(c) for c in node.coordinates) if s]
            if len(items) <= 1:
                return items[0] if items else ""
            conj = self.word(node.conjunction)
            return f"{', '.join(items[:-1])} {conj} {items[-1]}"
        if isinstance(node, Clause):
            return self.clause(node)
        raise RealizationError(f"cannot realize node {type(node).__name__}")

    def clause(self, node: Clause) -> str:
        features = node.features or Features()
        comp = self.word(node.complementiser) if node.complementiser else None
        if node.verb is None:
            return self.join(
                comp, self.render(node.subject), self.render(node.object), self.render(node.indirect_object)
            )
        if features.passive:
            if node.object is None:
                raise RealizationError("passive clause without an object")
            number, person = number_of(node.object)
            head, _, rest = node.verb.partition(" ")
            group = self.join(
                be_form(features.tense, number, person),
                past_participle(head, self.lexicon),
                rest,
            )
            agent = self.join("by", self.render(node.subject)) if node.subject is not None else None
            return self.join(
                comp, self.render(node.object), self.word(group), agent, self.render(node.indirect_object)
            )
        number, person = number_of(node.subject) if node.subject is not None else ("singular", 3)
        verb = conjugate(node.verb, features.tense, number, person, self.lexicon)
        return self.join(
            comp,
            self.render(node.subject),
            self.word(verb),
            self.render(node.object),
            self.render(node.indirect_object),
        )


_SKIP = re.compile(r"<[^>]*>|&[A-Za-z#0-9]+;")


def _capitalize_first(text: str) -> str:
    i = 0
    while i < len(text):
        m = _SKIP.match(text, i)
        if m:
            i = m.end()
            continue
        if text[i].isalpha():
            return text[:i] + text[i].upper() + text[i + 1:]
        i += 1
    return text


def finish(text: str) -> str:
    """Sentence orthography: single spaces, capital first letter, one final period."""
    text = re.sub(r"\s+", " ", text).strip()
    text = text.rstrip(". ")
    return _capitalize_first(text) + "."


def realize_phrase(tree: Phrase, format: str = "text", lexicon: Lexicon | None = None) -> str:
    return _Renderer(format, lexicon or default_lexicon()).render(tree)


def realize(tree: Phrase, format: str = "text", lexicon: Lexicon | None = None) -> Sentence:
    return Sentence(finish(realize_phrase(tree, format, lexicon)), format)
