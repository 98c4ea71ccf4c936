"""Fictitious decision bindings for the shipped scenario bundles.

Each generator simulates one run of the decision-making process and returns
the bindings the application would log, as a :class:`BindingsTable`.
"""

from __future__ import annotations

import random
from typing import Any, Callable, Sequence

from .prov.model import QualifiedName, TypedLiteral, XSD_NS
from .template import Binding, BindingsTable

CS = "http://openprovenance.org/ns/creditscoring#"
SA = "http://openprovenance.org/ns/schoolallocation#"

CREDIT_RECORD_TYPES = ("Salary", "LatePayment", "CreditCardBalance", "MissedPayment")
CRITERIA = ("HomeSchoolDistance", "Sibling", "MedicalNeed", "CatchmentArea")


def _qn(prefix: str, ns: str, local: str) -> QualifiedName:
    return QualifiedName(prefix, local, ns + local)


def _typed(lexical: str, datatype: str) -> TypedLiteral:
    return TypedLiteral(lexical, QualifiedName("xsd", datatype, XSD_NS + datatype))


class _Rows:
    def __init__(self) -> None:
        self.rows: list[Binding] = []

    def add(self, template: str, instance: int | str, **values) -> None:
        self.rows += [Binding(template, str(instance), k, v) for k, v in values.items()]

    def table(self) -> BindingsTable:
        return BindingsTable(tuple(self.rows))


def credit_decision(decision: int, rng: random.Random) -> BindingsTable:
    cs = lambda local: _qn("cs", CS, local)  # noqa: E731
    n_records = rng.randint(1, 4)
    records = [rng.randrange(100, 1000) for _ in range(n_records)]
    agency = cs(f"agencies/cra{rng.randint(1, 3)}")
    score = cs(f"scores/{decision}")
    scoring = cs(f"activities/score-{decision}")
    system = cs("systems/scorer-v2")
    value = rng.randint(300, 850)
    out = _Rows()
    out.add(
        "decision", 1,
        decision=cs(f"decisions/{decision}"),
        outcome=cs("Approved" if value >= 600 else "Declined"),
        decided_at=_typed(f"2021-03-{rng.randint(1, 28):02d}T{rng.randint(8, 17):02d}:00:00Z", "dateTime"),
        deciding=cs(f"activities/decide-{decision}"),
        score=score,
        system=system,
        lender=cs("lenders/acme-bank"),
    )
    out.add("scoring", 1, score=score, score_value=_typed(str(value), "int"), scoring=scoring, system=system)
    for i, rec in enumerate(dict.fromkeys(records), start=1):
        out.add(
            "credit_record", i,
            record=cs(f"records/{decision}-{rec}"),
            record_type=cs(rng.choice(CREDIT_RECORD_TYPES)),
            agency=agency,
            scoring=scoring,
            score=score,
        )
    return out.table()


def school_decision(decision: int, rng: random.Random) -> BindingsTable:
    sa = lambda local: _qn("sa", SA, local)  # noqa: E731
    application = sa(f"applications/a-{decision}")
    allocating = sa(f"activities/allocate-{decision}")
    school = sa(f"schools/{rng.choice(['hillside', 'riverside', 'oakfield'])}")
    offered = rng.random() < 0.7
    out = _Rows()
    out.add(
        "allocation", 1,
        decision=sa(f"decisions/{decision}"),
        outcome=sa("PlaceOffered" if offered else "Waitlisted"),
        allocating=allocating,
        application=application,
        system=sa("systems/allocator-1"),
        council=sa("authorities/la-4"),
    )
    out.add("application", 1, application=application, school=school,
            guardian=sa(f"guardians/g-{rng.randint(1, 500)}"))
    for i, kind in enumerate(rng.sample(CRITERIA, rng.randint(1, 3)), start=1):
        out.add(
            "criterion", i,
            criterion=sa(f"criteria/{decision}-c{i}"),
            criterion_type=sa(kind),
            application=application,
            allocating=allocating,
            decision=sa(f"decisions/{decision}"),
        )
    if offered:
        out.add("offer", 1, offer=sa(f"offers/{decision}"), school=school, decision=sa(f"decisions/{decision}"))
    return out.table()


GENERATORS: dict[str, Callable[[int, random.Random], BindingsTable]] = {
    "credit-card-mini": credit_decision,
    "school-allocation-mini": school_decision,
}


def generate(app: str, count: int, seed: int = 0) -> list[BindingsTable]:
    rng = random.Random(seed)
    return [GENERATORS[app](i, rng) for i in range(1, count + 1)]


def derive_profiles(profiles: Any, substitutions: Sequence[tuple[str, str]]) -> Any:
    """Apply word substitutions to every key and string in a profile tree.

    Substitutions apply in order, so longer phrases should come first.
    """
    def sub(text: str) -> str:
        for old, new in substitutions:
            text = text.replace(old, new)
        return text

    if isinstance(profiles, dict):
        return {sub(k): derive_profiles(v, substitutions) for k, v in profiles.items()}
    if isinstance(profiles, list):
        return [derive_profiles(v, substitutions) for v in profiles]
    if isinstance(profiles, str):
        return sub(profiles)
    return profiles
