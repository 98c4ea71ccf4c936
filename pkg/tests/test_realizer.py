from __future__ import annotations

import re

import pytest
from hypothesis import given, settings, strategies as st

from explainprov.errors import RealizationError
from explainprov.plan import AdjectivePhrase, Clause, CoordinatedPhrase, Features, Literal, NounPhrase
from explainprov.realizer import (
    be_form,
    conjugate,
    default_lexicon,
    finish,
    past_participle,
    past_tense,
    pluralize,
    realize,
)

ORTHOGRAPHY = re.compile(r"^[A-Z\"'].*\.$")

# a standard conjugation reference for the regular rules, written out by hand
REGULAR = {
    "impact": "impacted",
    "deny": "denied",
    "approve": "approved",
    "decline": "declined",
    "carry": "carried",
    "play": "played",
    "provide": "provided",
    "determine": "determined",
}


@pytest.mark.parametrize("verb, expected", sorted(REGULAR.items()))
def test_regular_participles(verb, expected):
    assert past_participle(verb) == expected


def test_irregular_table_wins():
    lex = default_lexicon()
    for base, forms in lex.verbs.items():
        assert past_participle(base) == forms["past_participle"]
        assert past_tense(base) == forms["past"]
    assert past_participle("make") == "made"
    seeded = {"be", "have", "do", "make", "take", "give", "get", "send", "find", "hold",
              "keep", "lead", "leave", "meet", "pay", "say", "see", "tell", "think", "write"}
    assert seeded <= set(lex.verbs)


def test_be_forms():
    assert be_form("past", "singular") == "was"
    assert be_form("past", "plural") == "were"
    assert be_form("present", "singular") == "is"
    assert be_form("present", "plural") == "are"
    assert be_form("future", "singular") == be_form("future", "plural") == "will be"


def test_conjugate_active():
    assert conjugate("approve", "present", "singular") == "approves"
    assert conjugate("approve", "present", "plural") == "approve"
    assert conjugate("approve", "future", "singular") == "will approve"
    assert conjugate("carry out", "past", "singular") == "carried out"


def test_pluralize():
    assert pluralize("record") == "records"
    assert pluralize("criterion") == "criteria"
    assert pluralize("agency") == "agencies"
    assert pluralize("late payment") == "late payments"


def test_active_clause():
    tree = Clause(subject="the system", verb="approve", object="the application", features=Features("past"))
    assert realize(tree).text == "The system approved the application."


def coordination(*items):
    return Clause(subject=CoordinatedPhrase("and", tuple(items)), verb="be", object="listed", features=Features("past"))


def test_coordination():
    assert realize(coordination("a")).text == "A was listed."
    assert realize(coordination("a", "b")).text == "A and b were listed."
    assert realize(coordination("a", "b", "c")).text == "A, b and c were listed."


def test_passive_agreement_and_by_phrase():
    tree = Clause(
        subject="the bank", verb="review",
        object=NounPhrase("record", specifier="the", plural=True),
        features=Features("present", True),
    )
    text = realize(tree).text
    assert text == "The records are reviewed by the bank."
    assert text.index("reviewed") < text.index("by the bank")


def test_passive_without_object():
    with pytest.raises(RealizationError, match="passive"):
        realize(Clause(subject="x", verb="see", features=Features("past", True)))


def test_verbless_clause_and_underscores():
    tree = Clause(complementiser="by", object=NounPhrase("credit_score", specifier="your"))
    assert realize(tree).text == "By your credit score."


def test_unknown_node():
    with pytest.raises(RealizationError):
        realize(object())


def test_html_escaping_and_links():
    tree = Clause(
        subject=NounPhrase("R&D <team>", post_modifiers=(AdjectivePhrase(Literal("x/1", href="http://e.org/a?b=1&c=2", parenthesized=True)),)),
        verb="approve",
        features=Features("past"),
    )
    out = realize(tree, "html").text
    assert "R&amp;D &lt;team&gt;" in out
    assert '<a href="http://e.org/a?b=1&amp;c=2">x/1</a>' in out
    stripped = html_to_text(out)
    assert stripped == realize(tree, "text").text


def html_to_text(text: str) -> str:
    import html

    return html.unescape(re.sub(r"</?a[^>]*>", "", text))


def test_capitalization_skips_markup():
    assert finish('<a href="x">records</a> moved') == '<a href="x">Records</a> moved.'
    assert finish("&lt;tag&gt; here") == "&lt;Tag&gt; here."


def test_finish_single_period():
    assert finish("done.. ") == "Done."
    assert finish("  two   spaces ") == "Two spaces."


words = st.text(alphabet="abcdefghij_ ", min_size=1, max_size=12).filter(lambda w: w.strip(" _"))


@settings(max_examples=150, deadline=None)
@given(
    subject=words, verb=st.sampled_from(["approve", "make", "deny", "impact", "see"]), obj=words,
    tense=st.sampled_from(["past", "present", "future"]), passive=st.booleans(),
    extras=st.lists(words, max_size=4),
)
def test_orthography_and_parity(subject, verb, obj, tense, passive, extras):
    tree = Clause(
        subject=NounPhrase(subject),
        verb=verb,
        object=CoordinatedPhrase("and", (NounPhrase(obj),) + tuple(
            NounPhrase(e, post_modifiers=(Literal(e, href=f"http://e.org/{i}", parenthesized=True),))
            for i, e in enumerate(extras)
        )),
        features=Features(tense, passive),
    )
    text = realize(tree).text
    assert ORTHOGRAPHY.match(text)
    assert "  " not in text and not text.endswith("..")
    assert html_to_text(realize(tree, "html").text) == text
    if passive:
        assert past_participle(verb) in text
