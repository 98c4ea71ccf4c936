"""Configuration bundles, decision store and the Explanation Assistant service."""

from .assistant import ExplanationAssistant, explain, explanation_body, expand_for, parse_bindings_for
from .bundle import Bundle, ExplanationSpec, Finding, check_bundle, load_bundle
from .http import AssistantServer, parse_listen
from .store import DecisionStore

__all__ = [
    "AssistantServer",
    "Bundle",
    "DecisionStore",
    "ExplanationAssistant",
    "ExplanationSpec",
    "Finding",
    "check_bundle",
    "expand_for",
    "explain",
    "explanation_body",
    "load_bundle",
    "parse_bindings_for",
    "parse_listen",
]
