"""Bundle validation: structure, cross-references and sample-trace checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError, ExplainError
from .prov import ProvDocument, QualifiedName
from .prov.model import PROV_NS
from .prov.traverse import undirected_reach
from .service.assistant import expand_for, parse_bindings_for
from .service.bundle import (
    DISCONNECTED,
    SAMPLE_DATA,
    UNBOUND_VARIABLE,
    Bundle,
    Finding,
    check_bundle,
)

_PROV_TYPE = PROV_NS + "type"


@dataclass
class ValidationReport:
    bundle: str
    findings: list[Finding] = field(default_factory=list)

    @property
    def errors(self) -> int:
        return sum(f.severity == "error" for f in self.findings)

    @property
    def warnings(self) -> int:
        return sum(f.severity == "warning" for f in self.findings)

    @property
    def ok(self) -> bool:
        return self.errors == 0

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def to_json(self) -> dict:
        return {
            "bundle": self.bundle,
            "findings": [f.to_json() for f in self.findings],
            "summary": {"errors": self.errors, "warnings": self.warnings},
        }

    def render(self) -> str:
        lines = [str(f) for f in self.findings]
        lines.append(f"{self.bundle}: {self.errors} error(s), {self.warnings} warning(s)")
        return "\n".join(lines)


def decision_roots(doc: ProvDocument, decision_type: QualifiedName) -> list[QualifiedName]:
    return [
        e.id for e in doc.elements
        if e.kind.keyword == "entity"
        and any(isinstance(v, QualifiedName) and v.iri == decision_type.iri for v in e.values(_PROV_TYPE))
    ]


def connectivity_findings(doc: ProvDocument, decision_type: QualifiedName, locator: str) -> list[Finding]:
    """Warn about statements not reachable (ignoring direction) from a decision entity."""
    roots = decision_roots(doc, decision_type)
    if not roots:
        return [Finding("warning", DISCONNECTED, f"trace has no entity typed {decision_type}", locator)]
    reached: set[str] = set()
    for root in roots:
        reached |= {q.iri for q in undirected_reach(doc, root)}
    orphans = [str(st.id) for st in doc.statements if st.id.iri not in reached]
    if not orphans:
        return []
    return [Finding(
        "warning", DISCONNECTED,
        f"statements not connected to the decision: {', '.join(orphans)}", locator,
    )]


def sample_findings(bundle: Bundle, text: str, locator: str) -> list[Finding]:
    try:
        table = parse_bindings_for(bundle, text)
    except ExplainError as exc:
        return [Finding("warning", SAMPLE_DATA, f"sample bindings rejected: {exc}", locator)]
    out = []
    complete = True
    for (template, instance), values in table.groups().items():
        expected = bundle.templates[template].variables
        missing = sorted(expected - set(values))
        extra = sorted(set(values) - expected)
        where = f"{locator}:{template}/{instance}"
        if missing:
            complete = False
            out.append(Finding("warning", UNBOUND_VARIABLE, f"unbound template variable(s): {', '.join(missing)}", where))
        if extra:
            out.append(Finding("warning", UNBOUND_VARIABLE, f"binding(s) for unknown variable(s): {', '.join(extra)}", where))
    if not complete or bundle.decision_type is None:
        return out
    try:
        doc = expand_for(bundle, table)
    except (ConfigurationError, ExplainError) as exc:
        return out + [Finding("warning", SAMPLE_DATA, f"sample bindings do not expand: {exc}", locator)]
    return out + connectivity_findings(doc, bundle.decision_type, locator)


def cmd_validate(bundle_dir: str | Path, sample_bindings: str | Path | None = None) -> ValidationReport:
    """Validate a bundle; sample traces come from ``sample_bindings`` or the bundle's ``samples/``."""
    root = Path(bundle_dir)
    if not root.is_dir():
        raise ConfigurationError(f"not a readable directory: {root}")
    bundle, findings = check_bundle(root)
    report = ValidationReport(str(root), list(findings))
    if bundle is None:
        return report
    if sample_bindings is not None:
        samples = [Path(sample_bindings)]
    else:
        samples = sorted((root / "samples").glob("*.csv"))
    for path in samples:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read sample bindings {path}: {exc.strerror}") from None
        report.findings += sample_findings(bundle, text, path.name)
    return report


def dumps(report: ValidationReport) -> str:
    return json.dumps(report.to_json(), indent=2)
