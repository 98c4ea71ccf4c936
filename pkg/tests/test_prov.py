from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from explainprov.errors import (
    DuplicateIdError,
    ProvSyntaxError,
    UndeclaredPrefixError,
    UnsupportedStatementError,
)
from explainprov.prov import (
    Element,
    Kind,
    ProvDocument,
    QualifiedName,
    Relation,
    StringLiteral,
    TypedLiteral,
    components,
    dangling_references,
    parse_provn,
    undirected_reach,
    write_provn,
)
from explainprov.errors import ProvError

from oracles import random_document

CS = "http://openprovenance.org/ns/creditscoring#"
HEAD = "document\n  prefix cs <http://openprovenance.org/ns/creditscoring#>\n"


def doc(body: str) -> ProvDocument:
    return parse_provn(HEAD + body + "\nendDocument\n")


def test_entity_with_type():
    d = doc("entity(cs:records/956, [prov:type='cs:CreditRecord'])")
    (e,) = d.statements
    assert e.kind is Kind.ENTITY
    assert e.id == QualifiedName("cs", "records/956", CS + "records/956")
    assert [v.iri for v in e.values("http://www.w3.org/ns/prov#type")] == [CS + "CreditRecord"]


def test_empty_document():
    d = parse_provn("document endDocument")
    assert d.statements == () and d.namespaces == {}


def test_relation_gets_synthetic_id():
    d = doc("wasAttributedTo(cs:records/956, cs:agencies/cra1)")
    (r,) = d.statements
    assert str(r.id) == "_:r1"
    assert r.field("entity").local == "records/956"
    assert r.field("agent").local == "agencies/cra1"


def test_synthetic_ids_in_document_order_and_not_written():
    d = doc("used(cs:a, cs:e)\nused(cs:x; cs:a, cs:f)\nused(cs:a, cs:g)")
    assert [str(s.id) for s in d.statements] == ["_:r1", "cs:x", "_:r2"]
    text = write_provn(d)
    assert "_:" not in text
    assert "used(cs:x; cs:a, cs:f)" in text


def test_multimap_prov_type():
    d = doc("entity(cs:r, [prov:type='cs:CreditRecord', prov:type='cs:Salary'])")
    assert len(d.statements[0].values("http://www.w3.org/ns/prov#type")) == 2


def test_literal_kinds():
    d = doc('entity(cs:r, [cs:a="x \\"q\\"", cs:b="612" %% xsd:int, cs:c=3, cs:d=2.5, cs:e=\'cs:Q\'])')
    vals = [v for _, v in d.statements[0].attributes]
    assert vals[0] == StringLiteral('x "q"')
    assert isinstance(vals[1], TypedLiteral) and vals[1].datatype.local == "int"
    assert vals[2].datatype.local == "int" and vals[3].datatype.local == "double"
    assert isinstance(vals[4], QualifiedName)


def test_activity_times_and_relation_time():
    d = doc("activity(cs:a, 2021-01-01T00:00:00Z, -)\nwasGeneratedBy(cs:e, cs:a, 2021-01-02T00:00:00Z)")
    assert d.statements[0].start == "2021-01-01T00:00:00Z" and d.statements[0].end is None
    assert d.statements[1].time == "2021-01-02T00:00:00Z"
    assert parse_provn(write_provn(d)) == d


def test_bad_datetime_literal_rejected():
    with pytest.raises(ProvSyntaxError):
        doc('entity(cs:r, [cs:t="yesterday" %% xsd:dateTime])')


def test_syntax_error_position():
    with pytest.raises(ProvSyntaxError) as err:
        doc("entity(cs:r,, )")
    assert err.value.line == 3


def test_undeclared_prefix():
    with pytest.raises(UndeclaredPrefixError):
        doc("entity(zz:r)")


def test_duplicate_id():
    with pytest.raises(DuplicateIdError):
        doc("entity(cs:r)\nagent(cs:r)")


def test_unsupported_statement():
    with pytest.raises(UnsupportedStatementError, match="specializationOf"):
        doc("specializationOf(cs:a, cs:b)")


def test_missing_end_document():
    with pytest.raises(ProvSyntaxError, match="endDocument"):
        parse_provn(HEAD + "entity(cs:r)")


def test_write_empty_and_single():
    assert write_provn(ProvDocument()) == "document\nendDocument\n"
    d = doc("entity(cs:r)")
    lines = write_provn(d).splitlines()
    assert [ln for ln in lines if "entity(" in ln] == ["  entity(cs:r)"]


def test_qualified_name_expand_compact():
    d = doc("entity(cs:records/960)")
    for q in d.qualified_names():
        assert d.compact(q.iri) == q


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_round_trip_property(seed):
    d = random_document(random.Random(seed))
    assert parse_provn(write_provn(d)) == d


# -- reachability


def test_reach_single_entity():
    d = doc("entity(cs:a)")
    assert {str(q) for q in undirected_reach(d, d.statements[0].id)} == {"cs:a"}


def test_reach_chain():
    d = doc(
        "entity(cs:d)\nentity(cs:s)\nentity(cs:r)\n"
        "wasDerivedFrom(cs:d, cs:s)\nwasDerivedFrom(cs:s, cs:r)"
    )
    assert len(undirected_reach(d, "http://openprovenance.org/ns/creditscoring#d")) == 5


def test_reach_excludes_other_component():
    d = doc("entity(cs:a)\nentity(cs:b)\nused(cs:x, cs:a)\nagent(cs:z)")
    got = {str(q) for q in undirected_reach(d, CS + "a")}
    assert got == {"cs:a", "_:r1"}
    assert len(components(d)) == 3


def test_reach_unknown_start():
    with pytest.raises(ProvError):
        undirected_reach(doc("entity(cs:a)"), CS + "nope")


def test_dangling_references():
    d = doc("entity(cs:a)\nused(cs:act, cs:a)")
    assert [(f, str(q)) for _, f, q in dangling_references(d)] == [("activity", "cs:act")]


def _bfs_oracle(d: ProvDocument, start: str) -> set[str]:
    # adjacency over element ids and relation ids, built from scratch
    nodes = {s.id.iri for s in d.statements}
    edges = []
    for s in d.statements:
        if isinstance(s, Relation):
            edges += [(s.id.iri, q.iri) for _, q in s.fields]
    seen, todo = {start}, [start]
    while todo:
        n = todo.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == n and y not in seen:
                    seen.add(y)
                    todo.append(y)
    return seen & nodes


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_reach_matches_oracle_and_is_symmetric(seed):
    d = random_document(random.Random(seed))
    elements = [s for s in d.statements if isinstance(s, Element)]
    reach = {e.id.iri: {q.iri for q in undirected_reach(d, e.id)} for e in elements}
    for e in elements:
        assert reach[e.id.iri] == _bfs_oracle(d, e.id.iri)
    for a in elements:
        for b in elements:
            assert (b.id.iri in reach[a.id.iri]) == (a.id.iri in reach[b.id.iri])


def test_model_invariants():
    q = QualifiedName("cs", "a", CS + "a")
    with pytest.raises(ValueError):
        Relation(Kind.USED, q, (("entity", q), ("activity", q)))
    with pytest.raises(ValueError):
        Element(Kind.ENTITY, q, (), "2021-01-01T00:00:00Z")
    with pytest.raises(ValueError):
        Relation(Kind.WAS_DERIVED_FROM, q, (("generatedEntity", q), ("usedEntity", q)), "2021-01-01T00:00:00Z")
