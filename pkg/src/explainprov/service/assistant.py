"""The Explanation Assistant: bindings in, provenance and explanations out."""

from __future__ import annotations

import hashlib
import json
import threading
from typing import Iterable, Mapping

from ..errors import (
    ConfigurationError,
    DataError,
    ExpansionError,
    ExplanationUnavailable,
    InstantiationError,
    NotFound,
    RealizationError,
)
from ..plan import instantiate
from ..prov import ProvDocument, write_provn
from ..query import evaluate
from ..realizer import FORMATS, realize
from ..template import BindingsTable, expand_decision, parse_bindings_csv
from .bundle import Bundle, ExplanationSpec
from .store import DecisionStore


def parse_bindings_for(bundle: Bundle, text: str) -> BindingsTable:
    """Parse a bindings CSV and check every template it names exists."""
    table = parse_bindings_csv(text, bundle.binding_namespaces)
    unknown = [t for t in table.templates() if t not in bundle.templates]
    if unknown:
        raise DataError(f"unknown template {unknown[0]!r}")
    return table


def expand_for(bundle: Bundle, table: BindingsTable) -> ProvDocument:
    try:
        return expand_decision(bundle.templates, table, bundle.namespaces)
    except ExpansionError as exc:
        raise ConfigurationError(f"provenance expansion failed: {exc}") from None


def explain(
    bundle: Bundle, doc: ProvDocument, spec: ExplanationSpec, profile: str, format: str = "text"
) -> list[str]:
    """Sentences for one explanation, in (result row, plan) order."""
    if format not in FORMATS:
        raise DataError(f"unknown format {format!r}")
    if profile not in spec.profiles:
        raise NotFound(f"profile {profile!r} is not offered for explanation {spec.id!r}")
    result = evaluate(bundle.queries[spec.query], doc)
    if not result.rows:
        raise ExplanationUnavailable(f"explanation {spec.id!r} is unavailable for this decision")
    sentences = []
    for row in result:
        for plan_name in spec.plans:
            try:
                tree = instantiate(
                    bundle.plans[plan_name], row, bundle.dictionary, profile,
                    format=format, namespaces=bundle.namespaces,
                )
                sentences.append(realize(tree, format).text)
            except (InstantiationError, RealizationError) as exc:
                raise ConfigurationError(f"plan {plan_name!r}: {exc}") from None
    return sentences


def explanation_body(sentences: list[str]) -> bytes:
    return json.dumps({"sentences": sentences}, ensure_ascii=False).encode("utf-8")


class ExplanationAssistant:
    """Serves one or more bundles over a shared decision store.

    Expanded provenance is cached per decision and keyed by the digest of the
    bindings it came from, so a cached document is never served for bindings
    it was not built from.
    """

    def __init__(self, bundles: Iterable[Bundle] | Mapping[str, Bundle], store: DecisionStore) -> None:
        if isinstance(bundles, Mapping):
            bundles = bundles.values()
        self.bundles = {b.app: b for b in bundles}
        self.store = store
        self._cache: dict[tuple[str, str], tuple[str, ProvDocument]] = {}
        self._cache_lock = threading.Lock()

    def bundle(self, app: str) -> Bundle:
        try:
            return self.bundles[app]
        except KeyError:
            raise NotFound(f"unknown app {app!r}") from None

    def post_bindings(self, app: str, decision_id: str, body: bytes | str) -> dict:
        bundle = self.bundle(app)
        if isinstance(body, str):
            body = body.encode("utf-8")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            raise DataError("bindings must be UTF-8") from None
        parse_bindings_for(bundle, text)
        status, digest = self.store.write(app, decision_id, body)
        with self._cache_lock:
            self._cache.pop((app, decision_id), None)
        return {"app": app, "decision": decision_id, "status": status, "sha256": digest}

    def provenance(self, app: str, decision_id: str) -> ProvDocument:
        bundle = self.bundle(app)
        body = self.store.read(app, decision_id)
        if body is None:
            raise NotFound(f"no bindings for decision {decision_id!r} of app {app!r}")
        digest = hashlib.sha256(body).hexdigest()
        key = (app, decision_id)
        with self._cache_lock:
            cached = self._cache.get(key)
        if cached is not None and cached[0] == digest:
            return cached[1]
        table = parse_bindings_for(bundle, body.decode("utf-8"))
        doc = expand_for(bundle, table)
        with self._cache_lock:
            self._cache[key] = (digest, doc)
        return doc

    def get_provenance(self, app: str, decision_id: str, format: str = "provn") -> str:
        if format != "provn":
            raise DataError(f"unsupported provenance format {format!r}")
        return write_provn(self.provenance(app, decision_id))

    def get_explanation(
        self, app: str, decision_id: str, explanation_id: str, profile: str, format: str = "text"
    ) -> list[str]:
        bundle = self.bundle(app)
        spec = bundle.explanation(explanation_id)
        if spec is None:
            raise NotFound(f"unknown explanation {explanation_id!r}")
        if profile not in spec.profiles:
            raise NotFound(f"profile {profile!r} is not offered for explanation {explanation_id!r}")
        doc = self.provenance(app, decision_id)
        return explain(bundle, doc, spec, profile, format)

    def list_explanations(self, app: str) -> list[dict]:
        return [spec.to_json() for spec in self.bundle(app).manifest]
