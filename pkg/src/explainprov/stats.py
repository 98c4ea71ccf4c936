"""Artifact size metrics for a bundle."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

from .plan import plan_size
from .query import query_cost
from .service.bundle import Bundle, load_bundle

COLUMNS = ("templates", "queries", "plans", "sentences", "dictionary", "profiles")


@dataclass(frozen=True)
class StatsReport:
    templates: int  # statements across all templates
    queries: int  # joins plus filters across all queries
    plans: int  # syntax-tree nodes across all plans
    sentences: int  # plans named by manifest explanations
    dictionary: int  # section entries plus profile keys
    profiles: int

    def to_json(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        width = max(map(len, COLUMNS))
        return "\n".join(f"{name.ljust(width)}  {getattr(self, name):>6}" for name in COLUMNS)


def bundle_stats(bundle: Bundle) -> StatsReport:
    return StatsReport(
        templates=sum(len(t.body.statements) for t in bundle.templates.values()),
        queries=sum(sum(query_cost(q).values()) for q in bundle.queries.values()),
        plans=sum(plan_size(p) for p in bundle.plans.values()),
        sentences=sum(len(spec.plans) for spec in bundle.manifest),
        dictionary=bundle.dictionary.term_count(),
        profiles=len(bundle.dictionary.profiles),
    )


def cmd_stats(bundle_dir: str | Path) -> StatsReport:
    return bundle_stats(load_bundle(bundle_dir))
