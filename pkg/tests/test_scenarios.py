from __future__ import annotations

import json

import pytest

from explainprov.scenarios import derive_profiles, generate
from explainprov.service import expand_for, explain, parse_bindings_for
from explainprov.template import write_bindings_csv
from explainprov.validate import sample_findings

from conftest import CREDIT, SCHOOL

SUBSTITUTIONS = [("credit_scoring", "school_allocation"), ("borrower", "guardian"), ("scoring", "allocation")]


@pytest.mark.parametrize("app", ["credit-card-mini", "school-allocation-mini"])
def test_generated_decisions_are_clean_and_explainable(app, credit_bundle, school_bundle):
    bundle = credit_bundle if app == "credit-card-mini" else school_bundle
    for table in generate(app, 25, seed=7):
        text = write_bindings_csv(table)
        assert sample_findings(bundle, text, "generated") == []
        doc = expand_for(bundle, parse_bindings_for(bundle, text))
        for spec in bundle.manifest:
            for profile in spec.profiles:
                for sentence in explain(bundle, doc, spec, profile):
                    assert sentence[0].isupper() and sentence.endswith(".")


def test_generation_is_seeded():
    assert generate("school-allocation-mini", 3, seed=1) == generate("school-allocation-mini", 3, seed=1)
    assert generate("school-allocation-mini", 3, seed=1) != generate("school-allocation-mini", 3, seed=2)


def test_school_profiles_derive_from_credit_profiles():
    credit = json.loads((CREDIT / "dictionary.json").read_text())["profiles"]
    school = json.loads((SCHOOL / "dictionary.json").read_text())["profiles"]
    derived = derive_profiles({"borrower": credit["borrower"], "staff": credit["staff"]}, SUBSTITUTIONS)
    for profile, entries in derived.items():
        for key, value in entries.items():
            assert school[profile][key] == value


def test_school_sentences(school_bundle):
    text = (SCHOOL / "samples" / "decision-1.csv").read_text()
    doc = expand_for(school_bundle, parse_bindings_for(school_bundle, text))
    spec = school_bundle.explanation("allocation-factors")
    assert explain(school_bundle, doc, spec, "guardian") == [
        "Your child's school place was determined by your home-school distance (criteria/c1) "
        "and a sibling at the school (criteria/c2)."
    ]
    assert explain(school_bundle, doc, spec, "staff")[0].startswith("Their child's school place")
