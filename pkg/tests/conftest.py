from __future__ import annotations

from pathlib import Path

import pytest

from explainprov.prov import ProvDocument
from explainprov.service import Bundle, load_bundle, expand_for, parse_bindings_for

BUNDLES = Path(__file__).resolve().parents[1] / "src" / "explainprov" / "bundles"
CREDIT = BUNDLES / "credit-card-mini"
SCHOOL = BUNDLES / "school-allocation-mini"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def credit_bundle() -> Bundle:
    return load_bundle(CREDIT)


@pytest.fixture(scope="session")
def school_bundle() -> Bundle:
    return load_bundle(SCHOOL)


@pytest.fixture(scope="session")
def credit_csv() -> str:
    return (CREDIT / "samples" / "decision-1.csv").read_text()


@pytest.fixture(scope="session")
def credit_doc(credit_bundle, credit_csv) -> ProvDocument:
    return expand_for(credit_bundle, parse_bindings_for(credit_bundle, credit_csv))
