from __future__ import annotations

import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from explainprov.errors import BindingsError, ExpansionError
from explainprov.prov import QualifiedName, StringLiteral, TypedLiteral, parse_provn, write_provn
from explainprov.prov.model import Relation
from explainprov.template import (
    Binding,
    BindingsTable,
    expand,
    expand_decision,
    load_template,
    merge_documents,
    parse_bindings_csv,
    write_bindings_csv,
)

from conftest import CREDIT

CS = "http://openprovenance.org/ns/creditscoring#"
NS = {"cs": CS}
HEADER = "template,instance,variable,value\n"


def cs(local: str) -> QualifiedName:
    return QualifiedName("cs", local, CS + local)


def fig3():
    text = (CREDIT / "templates" / "electoral_registry.provn").read_text()
    return load_template(parse_provn(text), "electoral_registry"), text


def test_fig3_variables():
    template, text = fig3()
    assert template.variables == {"record", "provider"}
    # oracle: textual scan for var: names
    body = "\n".join(ln for ln in text.splitlines() if "prefix" not in ln)
    assert template.variables == set(re.findall(r"var:(\w+)", body))


def test_variable_in_attribute_value():
    doc = parse_provn(
        "document prefix var <http://openprovenance.org/var#> prefix cs <%s>\n"
        "entity(cs:e, [cs:when='var:when'])\nendDocument" % CS
    )
    assert load_template(doc, "t").variables == {"when"}


def test_concrete_template_has_no_variables():
    doc = parse_provn("document prefix cs <%s> entity(cs:e) endDocument" % CS)
    t = load_template(doc, "t")
    assert t.variables == frozenset()
    assert expand(t, {}) == list(doc.statements)


def test_fig3_expansion():
    template, _ = fig3()
    out = expand(template, {"record": cs("records/956"), "provider": cs("agencies/cra1")})
    assert len(out) == 3
    assert out[0].id == cs("records/956") and out[0].values(
        "http://www.w3.org/ns/prov#type")[0] == cs("ElectoralRegistryEntry")
    assert out[1].id == cs("agencies/cra1")
    assert dict(out[2].fields) == {"entity": cs("records/956"), "agent": cs("agencies/cra1")}


def test_missing_binding_named():
    template, _ = fig3()
    with pytest.raises(ExpansionError, match="provider"):
        expand(template, {"record": cs("r")})


def test_literal_in_identifier_position():
    template, _ = fig3()
    with pytest.raises(ExpansionError, match="literal"):
        expand(template, {"record": StringLiteral("x"), "provider": cs("p")})


def test_parse_csv_values():
    table = parse_bindings_csv(
        HEADER
        + "attribution,1,record,cs:records/956\n"
        + 'a,1,s,"""hello"""\n'
        + 'a,1,t,"""612""^^xsd:int"\n'
        + "a,1,u,plain words\n",
        NS,
    )
    values = [b.value for b in table.rows]
    assert values[0] == cs("records/956")
    assert table.groups()[("attribution", "1")] == {"record": cs("records/956")}
    assert values[1] == StringLiteral("hello")
    assert isinstance(values[2], TypedLiteral) and values[2].lexical == "612"
    assert values[3] == StringLiteral("plain words")


def test_parse_csv_empty_and_groups():
    assert parse_bindings_csv(HEADER).rows == ()
    table = parse_bindings_csv(HEADER + "t,1,x,cs:a\nt,2,x,cs:b\nu,1,y,cs:c\n", NS)
    assert len(table.groups()) == 3
    assert len({(b.template, b.instance) for b in table.rows if b.template == "t"}) == 2


@pytest.mark.parametrize(
    "body, row, message",
    [
        ("t,1,x,zz:a\n", 1, "unknown prefix"),
        ("t,1,x,cs:a\nt,1,x,cs:b\n", 2, "bound twice"),
        ("t,1,x\n", 1, "4 columns"),
    ],
)
def test_csv_errors_carry_row(body, row, message):
    with pytest.raises(BindingsError, match=message) as err:
        parse_bindings_csv(HEADER + body, NS)
    assert err.value.row == row


def test_csv_bad_header():
    with pytest.raises(BindingsError, match="header"):
        parse_bindings_csv("a,b,c,d\n")


def test_csv_round_trip():
    rows = (
        Binding("t", "1", "a", cs("x")),
        Binding("t", "1", "b", StringLiteral('with "quotes", commas')),
        Binding("t", "2", "c", TypedLiteral("2021-01-01T00:00:00Z", QualifiedName("xsd", "dateTime", "http://www.w3.org/2001/XMLSchema#dateTime"))),
    )
    table = BindingsTable(rows)
    assert parse_bindings_csv(write_bindings_csv(table), NS) == table


# -- expand_decision


def _templates():
    return {
        p.stem: load_template(parse_provn(p.read_text()), p.stem)
        for p in sorted((CREDIT / "templates").glob("*.provn"))
    }


def _statement_key(s):
    return (s.kind, s.id.iri if not s.id.is_synthetic else None,
            tuple((n, q.iri) for n, q in getattr(s, "fields", ())))


def test_expand_decision_dedups_shared_statements(credit_csv):
    templates = _templates()
    table = parse_bindings_csv(credit_csv, {"cs": CS, "pl": "http://openprovenance.org/ns/plead#"})
    doc = expand_decision(templates, table)
    # oracle: set union of independently expanded groups
    union = set()
    for (name, _), bindings in table.groups().items():
        union |= {_statement_key(s) for s in expand(templates[name], bindings)}
    assert {_statement_key(s) for s in doc.statements} == union
    assert len(doc.statements) == len({(_statement_key(s), s.id.iri if not isinstance(s, Relation) else None) for s in doc.statements})
    assert "var:" not in write_provn(doc)
    assert "http://openprovenance.org/var#" not in write_provn(doc)


def test_expand_decision_empty():
    assert expand_decision(_templates(), BindingsTable()).statements == ()


def test_expand_decision_unknown_template():
    table = BindingsTable((Binding("nope", "1", "x", cs("a")),))
    with pytest.raises(ExpansionError, match="nope"):
        expand_decision(_templates(), table)


def test_expand_decision_annotates_group():
    table = BindingsTable((Binding("electoral_registry", "7", "record", cs("a")),))
    with pytest.raises(ExpansionError, match="template 'electoral_registry', instance '7'.*provider"):
        expand_decision(_templates(), table)


def test_expansion_is_deterministic(credit_csv):
    table = parse_bindings_csv(credit_csv, {"cs": CS, "pl": "http://openprovenance.org/ns/plead#"})
    assert expand_decision(_templates(), table) == expand_decision(_templates(), table)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_expansion_distributes_over_groups(seed):
    from explainprov.scenarios import generate

    table = generate("credit-card-mini", 1, seed)[0]
    groups = list(table.groups())
    rng = random.Random(seed)
    left = {g for g in groups if rng.random() < 0.5}
    rows1 = BindingsTable(tuple(b for b in table.rows if (b.template, b.instance) in left))
    rows2 = BindingsTable(tuple(b for b in table.rows if (b.template, b.instance) not in left))
    templates = _templates()
    whole = expand_decision(templates, table)
    merged = merge_documents(expand_decision(templates, rows1), expand_decision(templates, rows2))
    key = lambda d: sorted(map(repr, (_statement_key(s) for s in d.statements)))  # noqa: E731
    assert key(whole) == key(merged)


def test_conflicting_explicit_relation_ids():
    doc = parse_provn(
        "document prefix var <http://openprovenance.org/var#> prefix cs <%s>\n"
        "used(cs:u1; var:a, var:e)\nendDocument" % CS
    )
    t = load_template(doc, "t")
    table = BindingsTable((
        Binding("t", "1", "a", cs("a1")), Binding("t", "1", "e", cs("e1")),
        Binding("t", "2", "a", cs("a2")), Binding("t", "2", "e", cs("e2")),
    ))
    with pytest.raises(ExpansionError, match="cs:u1"):
        expand_decision({"t": t}, table)
