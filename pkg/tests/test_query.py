from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from explainprov.errors import QueryError, QuerySyntaxError
from explainprov.prov import parse_provn
from explainprov.query import Seq, derivation_star, evaluate, parse_query, query_cost

from conftest import DATA
from oracles import brute_force, closure_bfs, closure_matrix, engine_rows, random_document, random_query

REFERENCE_QUERY = (DATA / "score-impact-reference.pq").read_text()
CS = "http://openprovenance.org/ns/creditscoring#"


def doc(body: str):
    return parse_provn(
        "document prefix cs <%s> prefix pl <http://openprovenance.org/ns/plead#>\n%s\nendDocument" % (CS, body)
    )


def test_reference_query_ast():
    ast = parse_query(REFERENCE_QUERY)
    assert [c.var for c in ast.from_clauses] == ["decision", "derivation", "record"]
    assert query_cost(ast) == {"joins": 2, "filters": 2}
    assert (ast.group_by.group_var, ast.group_by.agg_var, ast.group_by.agg_kind) == ("decision", "record", "Seq")


def test_minimal_query():
    ast = parse_query("select * from e a prov:Entity")
    assert len(ast.from_clauses) == 1 and query_cost(ast) == {"joins": 0, "filters": 0}
    assert ast.group_by is None
    assert evaluate(ast, doc("")).rows == []


def test_cost_of_constructed_query():
    ast = parse_query(
        "select * from a a prov:Entity from g a prov:WasGeneratedBy join g.entity = a.id "
        "from b a prov:Activity join b.id = g.activity "
        "from w a prov:WasAssociatedWith join w.activity = b.id where a[prov:type] >= 'prov:X'"
    )
    assert query_cost(ast) == {"joins": 3, "filters": 1}


def test_keywords_case_insensitive_and_comments():
    ast = parse_query("# leading\nSELECT * FROM e A prov:Entity # trailing\nWHERE e[prov:type] = 'prov:X'")
    assert len(ast.filters) == 1


@pytest.mark.parametrize(
    "text, error",
    [
        ("select * from d a prov:Entity join decision.id = d.id", "undeclared variable 'decision'"),
        ("select * from d a prov:Thing", "unknown record type"),
        ("select * from d a prov:Entity from g a prov:Used join g.agent = d.id", "unknown field 'agent'"),
        ("select * from d a prov:Entity from d a prov:Agent", "declared twice"),
        ("select * from d a prov:Entity from e a prov:Entity group by d aggregate e with Count", "unsupported aggregate"),
        ("select * from d a prov:Entity where x[prov:type] >= 'prov:X'", "undeclared variable"),
    ],
)
def test_semantic_errors(text, error):
    with pytest.raises(QueryError, match=error):
        parse_query(text)


def test_syntax_error_has_position():
    with pytest.raises(QuerySyntaxError) as err:
        parse_query("select *\nfrom d prov:Entity")
    assert err.value.line == 2


def test_reference_query_over_fixture(credit_doc):
    result = evaluate(parse_query(REFERENCE_QUERY), credit_doc)
    assert len(result.rows) == 1
    row = result.rows[0]
    assert str(row["decision"].id) == "cs:decisions/1"
    assert isinstance(row["record"], Seq)
    assert [str(r.id) for r in row["record"]] == ["cs:records/960", "cs:records/956"]


def test_star_small_fixture():
    d = doc("wasDerivedFrom(cs:d, cs:s)\nwasDerivedFrom(cs:s, cs:r1)\nwasDerivedFrom(cs:s, cs:r2)")
    pairs = {(r.field("generatedEntity").local, r.field("usedEntity").local) for r in derivation_star(d)}
    assert pairs == {("d", "s"), ("d", "r1"), ("d", "r2"), ("s", "r1"), ("s", "r2")}
    assert str(derivation_star(d)[0].id) == "star:cs:d->cs:s"


def test_star_empty_and_two_cycle():
    assert derivation_star(doc("entity(cs:a)")) == []
    d = doc("wasDerivedFrom(cs:a, cs:b)\nwasDerivedFrom(cs:b, cs:a)")
    pairs = {(r.field("generatedEntity").local, r.field("usedEntity").local) for r in derivation_star(d)}
    assert pairs == {("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")}


def test_star_no_fabricated_reflexive_pairs():
    d = doc("wasDerivedFrom(cs:a, cs:b)")
    assert all(r.field("generatedEntity") != r.field("usedEntity") for r in derivation_star(d))


def test_containment_filter():
    d = doc("entity(cs:r, [prov:type='cs:CreditRecord', prov:type='cs:Salary'])\nentity(cs:q, [prov:type='cs:Salary'])")
    q = "prefix cs <%s> select * from r a prov:Entity where r[prov:type] >= 'cs:CreditRecord'" % CS
    assert [str(row["r"].id) for row in evaluate(parse_query(q), d)] == ["cs:r"]
    q_eq = q.replace(">=", "=")
    assert [str(row["r"].id) for row in evaluate(parse_query(q_eq), d)] == ["cs:r"]


def test_relation_attribute_filter():
    d = doc('used(cs:a, cs:e, [cs:role="input"])\nused(cs:a, cs:f)')
    q = "prefix cs <%s> select * from u a prov:Used where u[cs:role] >= \"input\"" % CS
    assert [str(row["u"].id) for row in evaluate(parse_query(q), d)] == ["_:r1"]


def test_group_by_keeps_first_row_and_encounter_order():
    d = doc(
        "entity(cs:d1)\nentity(cs:d2)\nentity(cs:x)\nentity(cs:y)\n"
        "wasDerivedFrom(cs:d2, cs:y)\nwasDerivedFrom(cs:d1, cs:x)\nwasDerivedFrom(cs:d1, cs:y)\nwasDerivedFrom(cs:d1, cs:x)"
    )
    q = (
        "select * from g a prov:Entity from w a prov:WasDerivedFrom join w.generatedEntity = g.id "
        "from u a prov:Entity join u.id = w.usedEntity group by g aggregate u with Seq"
    )
    rows = evaluate(parse_query(q), d).rows
    assert [str(r["g"].id) for r in rows] == ["cs:d1", "cs:d2"]
    assert [str(x.id) for x in rows[0]["u"]] == ["cs:x", "cs:y"]
    assert str(rows[0]["w"].id) == "_:r2"


def test_result_json(credit_doc):
    out = evaluate(parse_query(REFERENCE_QUERY), credit_doc).to_json()
    assert out["columns"] == ["decision", "derivation", "record"]
    assert out["rows"][0]["record"] == ["cs:records/960", "cs:records/956"]


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_evaluate_matches_brute_force(seed):
    rng = random.Random(seed)
    d = random_document(rng, id_pool=3, derivation_bias=0.3)
    text, desc = random_query(rng, d)
    assert engine_rows(evaluate(parse_query(text), d), desc) == brute_force(desc, d)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_results_connected_by_joins(seed):
    rng = random.Random(seed)
    d = random_document(rng, id_pool=3)
    text, desc = random_query(rng, d)
    ast = parse_query(text)
    if ast.group_by is not None:
        return
    for row in evaluate(ast, d).rows:
        for j in ast.joins:
            assert row[j.left_var].field(j.left_field).iri == row[j.right_var].field(j.right_field).iri


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_adding_filter_never_adds_rows(seed):
    rng = random.Random(seed)
    d = random_document(rng, id_pool=3)
    text, desc = random_query(rng, d)
    if desc["group"] is not None:
        return
    var = desc["clauses"][0][0]
    keyword = "and" if desc["filters"] else "where"
    narrowed = text + f"\n{keyword} {var}[prov:type] >= 'ex:Red'"
    base = engine_rows(evaluate(parse_query(text), d), desc)
    extra = engine_rows(evaluate(parse_query(narrowed), d), desc)
    assert extra <= base


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=25))
def test_star_matches_closure_oracles(edges):
    body = "\n".join(f"wasDerivedFrom(cs:n{a}, cs:n{b})" for a, b in edges)
    d = doc(body)
    got = [(r.field("generatedEntity").iri, r.field("usedEntity").iri) for r in derivation_star(d)]
    plain = [(CS + f"n{a}", CS + f"n{b}") for a, b in edges]
    assert len(got) == len(set(got))
    assert set(got) == closure_bfs(plain) == closure_matrix(plain)
