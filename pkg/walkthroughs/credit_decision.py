"""From a credit decision's bindings to the sentences an applicant reads.

Walks the pipeline one stage at a time with the shipped credit-card bundle:
expand the bindings into a provenance trace, query it for the records that
fed the score, instantiate the plan for two audiences and realize it.

    python walkthroughs/credit_decision.py
"""

from __future__ import annotations

from explainprov.plan import instantiate
from explainprov.prov import write_provn
from explainprov.query import evaluate
from explainprov.realizer import realize
from explainprov.service import load_bundle
from explainprov.service.bundle import Bundle
from explainprov.cli import resolve_bundle
from explainprov.template import expand_decision, parse_bindings_csv


def banner(title: str) -> None:
    print(f"\n== {title} ==")


def main() -> None:
    bundle: Bundle = load_bundle(resolve_bundle("credit-card-mini"))
    csv_text = (bundle.path / "samples" / "decision-1.csv").read_text()

    banner("bindings")
    print(csv_text.strip())

    table = parse_bindings_csv(csv_text, bundle.binding_namespaces)
    doc = expand_decision(bundle.templates, table, bundle.namespaces)
    banner(f"expanded trace ({len(doc.statements)} statements)")
    print(write_provn(doc))

    spec = bundle.explanation("score-impact")
    result = evaluate(bundle.queries[spec.query], doc)
    banner("query result")
    for row in result.rows:
        print({name: str(value) for name, value in row.items()})

    for profile in ("borrower", "staff"):
        for fmt in ("text", "html"):
            banner(f"{profile} / {fmt}")
            for row in result.rows:
                for plan_name in spec.plans:
                    tree = instantiate(bundle.plans[plan_name], row, bundle.dictionary, profile,
                                       format=fmt, namespaces=bundle.namespaces)
                    print(realize(tree, fmt))


if __name__ == "__main__":
    main()
