"""Decision explanations from provenance: templates, queries, plans, realization."""

__version__ = "0.1.0"
