"""Configuration bundles.

A bundle directory holds everything one application's explanations need::

    manifest.json        app name, namespaces, decision type, explanations
    templates/*.provn    provenance templates
    queries/*.pq         provenance queries
    plans/*.json         explanation plans
    dictionary.json      sections and audience profiles

Loading and validation share one checker, so a bundle loads exactly when the
checker reports no errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..errors import BundleError, ExplainError
from ..plan import Dictionary, FunCall, Phrase, dict_refs, load_dictionary, parse_plan, walk
from ..plan.nodes import variable_references
from ..prov import QualifiedName, parse_provn
from ..prov.model import DEFAULT_NAMESPACES
from ..query import QueryAst, parse_query
from ..template import Template, load_template

# finding codes
STRUCTURE = "V0"
DISCONNECTED = "V1"
PLAN_VARIABLE = "V2"
DICTIONARY_KEY = "V3"
UNBOUND_VARIABLE = "V4"
QUERY = "V5"
SAMPLE_DATA = "V6"


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str
    locator: str = ""

    def __str__(self) -> str:
        where = f" [{self.locator}]" if self.locator else ""
        return f"{self.severity.upper()} {self.code}{where}: {self.message}"

    def to_json(self) -> dict:
        return {"severity": self.severity, "code": self.code, "message": self.message, "locator": self.locator}


@dataclass(frozen=True)
class ExplanationSpec:
    id: str
    query: str
    plans: tuple[str, ...]
    profiles: tuple[str, ...]
    audience: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "query": self.query,
            "plans": list(self.plans),
            "profiles": list(self.profiles),
            "audience": self.audience,
        }


@dataclass(frozen=True)
class Bundle:
    app: str
    namespaces: Mapping[str, str]
    templates: Mapping[str, Template]
    queries: Mapping[str, QueryAst]
    plans: Mapping[str, Phrase]
    dictionary: Dictionary
    manifest: tuple[ExplanationSpec, ...]
    decision_type: QualifiedName | None
    path: Path | None = field(default=None, compare=False)

    def explanation(self, explanation_id: str) -> ExplanationSpec | None:
        for spec in self.manifest:
            if spec.id == explanation_id:
                return spec
        return None

    @property
    def binding_namespaces(self) -> dict[str, str]:
        """Prefixes usable in bindings CSV values."""
        ns: dict[str, str] = {}
        for t in self.templates.values():
            ns.update(t.namespaces)
        ns.update(self.namespaces)
        return ns


class _Checker:
    def __init__(self, root: Path) -> None:
        self.root = root
        self.findings: list[Finding] = []

    def error(self, code: str, message: str, locator: str = "") -> None:
        self.findings.append(Finding("error", code, message, locator))

    def read(self, rel: str) -> str | None:
        path = self.root / rel
        if not path.is_file():
            self.error(STRUCTURE, "missing file", rel)
            return None
        return path.read_text(encoding="utf-8")

    def files(self, sub: str, suffix: str) -> list[Path]:
        d = self.root / sub
        return sorted(d.glob(f"*{suffix}")) if d.is_dir() else []

    def run(self) -> Bundle | None:
        if not self.root.is_dir():
            raise BundleError(f"not a directory: {self.root}")
        manifest = self.manifest()
        namespaces = dict(manifest.get("namespaces", {})) if manifest else {}

        templates: dict[str, Template] = {}
        for path in self.files("templates", ".provn"):
            rel = f"templates/{path.name}"
            try:
                templates[path.stem] = load_template(parse_provn(path.read_text("utf-8")), path.stem)
            except ExplainError as exc:
                self.error(STRUCTURE, f"template does not parse: {exc}", rel)

        queries: dict[str, QueryAst] = {}
        for path in self.files("queries", ".pq"):
            try:
                queries[path.stem] = parse_query(path.read_text("utf-8"))
            except ExplainError as exc:
                self.error(QUERY, f"query does not parse: {exc}", f"queries/{path.name}")

        plans: dict[str, Phrase] = {}
        for path in self.files("plans", ".json"):
            try:
                plans[path.stem] = parse_plan(path.read_text("utf-8"))
            except ExplainError as exc:
                self.error(STRUCTURE, f"plan does not parse: {exc}", f"plans/{path.name}")

        dictionary = None
        text = self.read("dictionary.json")
        if text is not None:
            try:
                dictionary = load_dictionary(text, namespaces, strict=False)
            except ExplainError as exc:
                self.error(STRUCTURE, f"dictionary does not parse: {exc}", "dictionary.json")

        specs = self.specs(manifest, queries, plans, dictionary)
        if dictionary is not None:
            self.dictionary_keys(dictionary, plans)
            self.plan_functions(dictionary, plans)
        for spec in specs:
            if spec.query in queries:
                self.plan_variables(spec, queries[spec.query], plans)

        decision_type = None
        if manifest is not None:
            raw = manifest.get("decision_type")
            if raw is None:
                pass
            elif not isinstance(raw, str):
                self.error(STRUCTURE, "decision_type must be a qualified name", "manifest.json")
            else:
                prefix, _, local = raw.partition(":")
                ns = {**DEFAULT_NAMESPACES, **namespaces}
                if prefix not in ns:
                    self.error(STRUCTURE, f"undeclared prefix in decision_type {raw!r}", "manifest.json")
                else:
                    decision_type = QualifiedName(prefix, local, ns[prefix] + local)

        if any(f.severity == "error" for f in self.findings):
            return None
        return Bundle(
            app=manifest["app"],
            namespaces=namespaces,
            templates=templates,
            queries=queries,
            plans=plans,
            dictionary=dictionary,
            manifest=tuple(specs),
            decision_type=decision_type,
            path=self.root,
        )

    def manifest(self) -> dict | None:
        text = self.read("manifest.json")
        if text is None:
            return None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            self.error(STRUCTURE, f"malformed JSON at line {exc.lineno}: {exc.msg}", "manifest.json")
            return None
        if not isinstance(data, dict) or not isinstance(data.get("app"), str) or not data["app"]:
            self.error(STRUCTURE, "manifest needs a non-empty 'app' name", "manifest.json")
            return None
        ns = data.get("namespaces", {})
        if not isinstance(ns, dict) or not all(isinstance(v, str) for v in ns.values()):
            self.error(STRUCTURE, "'namespaces' must map prefixes to IRIs", "manifest.json")
            data["namespaces"] = {}
        if not isinstance(data.get("explanations", []), list):
            self.error(STRUCTURE, "'explanations' must be a list", "manifest.json")
            data["explanations"] = []
        return data

    def specs(self, manifest, queries, plans, dictionary) -> list[ExplanationSpec]:
        if manifest is None:
            return []
        out = []
        seen = set()
        for i, raw in enumerate(manifest.get("explanations", [])):
            loc = f"manifest.json:explanations[{i}]"
            try:
                spec = ExplanationSpec(
                    id=str(raw["id"]),
                    query=str(raw["query"]),
                    plans=tuple(str(p) for p in raw["plans"]),
                    profiles=tuple(str(p) for p in raw.get("profiles", [])),
                    audience=str(raw.get("audience", "")),
                )
            except (KeyError, TypeError):
                self.error(STRUCTURE, "explanation needs 'id', 'query' and 'plans'", loc)
                continue
            if spec.id in seen:
                self.error(STRUCTURE, f"duplicate explanation id {spec.id!r}", loc)
            seen.add(spec.id)
            if not spec.plans:
                self.error(STRUCTURE, f"explanation {spec.id!r} lists no plans", loc)
            if spec.query not in queries and not (self.root / "queries" / f"{spec.query}.pq").exists():
                self.error(STRUCTURE, f"explanation {spec.id!r} references unknown query {spec.query!r}", loc)
            for p in spec.plans:
                if p not in plans and not (self.root / "plans" / f"{p}.json").exists():
                    self.error(STRUCTURE, f"explanation {spec.id!r} references unknown plan {p!r}", loc)
            if dictionary is not None:
                for prof in spec.profiles:
                    if prof not in dictionary.profiles:
                        self.error(STRUCTURE, f"explanation {spec.id!r} references unknown profile {prof!r}", loc)
            out.append(spec)
        return out

    def dictionary_keys(self, dictionary: Dictionary, plans: Mapping[str, Phrase]) -> None:
        profiles = dictionary.profiles
        refs = [(f"plans/{name}.json", k) for name, plan in plans.items() for k in dict_refs(plan)]
        refs += [(f"dictionary.json:{loc}", k) for loc, k in dictionary.referenced_keys()]
        for loc, key in refs:
            missing = [p for p, entries in profiles.items() if key not in entries]
            if not profiles:
                self.error(DICTIONARY_KEY, f"dictionary reference {key!r} but no profiles are defined", loc)
            for p in missing:
                self.error(DICTIONARY_KEY, f"key {key!r} is not defined in profile {p!r}", loc)
        all_keys = set().union(*(set(e) for e in profiles.values())) if profiles else set()
        for p, entries in profiles.items():
            for key in sorted(all_keys - set(entries)):
                if not any(k == key for _, k in refs):
                    self.error(DICTIONARY_KEY, f"key {key!r} is not defined in profile {p!r}", "dictionary.json")

    def plan_functions(self, dictionary: Dictionary, plans: Mapping[str, Phrase]) -> None:
        ns = {**DEFAULT_NAMESPACES, **dictionary.namespaces}
        for name, plan in plans.items():
            for node in walk(plan):
                if not isinstance(node, FunCall) or node.function != "lookup-type":
                    continue
                loc = f"plans/{name}.json"
                if node.arg2 not in dictionary.sections:
                    self.error(DICTIONARY_KEY, f"lookup-type uses unknown dictionary section {node.arg2!r}", loc)
                if node.property.partition(":")[0] not in ns:
                    self.error(STRUCTURE, f"undeclared prefix in @property {node.property!r}", loc)

    def plan_variables(self, spec: ExplanationSpec, query: QueryAst, plans: Mapping[str, Phrase]) -> None:
        available = set(query.variables)
        for p in spec.plans:
            if p not in plans:
                continue
            for var in dict.fromkeys(variable_references(plans[p])):
                if var not in available:
                    self.error(
                        PLAN_VARIABLE,
                        f"plan {p!r} references variable {var!r}, which query {spec.query!r} "
                        f"does not bind (available: {', '.join(sorted(available))})",
                        f"plans/{p}.json",
                    )


def check_bundle(path: str | Path) -> tuple[Bundle | None, list[Finding]]:
    checker = _Checker(Path(path))
    bundle = checker.run()
    return bundle, checker.findings


def load_bundle(path: str | Path) -> Bundle:
    bundle, findings = check_bundle(path)
    errors = [f for f in findings if f.severity == "error"]
    if bundle is None or errors:
        summary = "; ".join(str(f) for f in errors[:5])
        raise BundleError(f"bundle {path} does not load: {summary}", errors)
    return bundle
