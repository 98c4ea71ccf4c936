from .model import (
    DEFAULT_NAMESPACES,
    PROV_NS,
    PROVEXT_NS,
    VAR_NS,
    XSD_NS,
    AttributeValue,
    Element,
    Kind,
    ProvDocument,
    QualifiedName,
    Relation,
    Statement,
    StringLiteral,
    TypedLiteral,
    parse_qname,
    value_key,
)
from .provn import format_statement, parse_provn, write_provn
from .traverse import components, dangling_references, undirected_reach

__all__ = [
    "DEFAULT_NAMESPACES", "PROV_NS", "PROVEXT_NS", "VAR_NS", "XSD_NS",
    "AttributeValue", "Element", "Kind", "ProvDocument", "QualifiedName", "Relation",
    "Statement", "StringLiteral", "TypedLiteral", "components", "dangling_references",
    "format_statement", "parse_provn", "parse_qname", "undirected_reach", "value_key",
    "write_provn",
]
