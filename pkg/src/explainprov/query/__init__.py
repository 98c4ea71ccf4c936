from .ast import Filter, FromClause, GroupBy, Join, QueryAst, fields_for, query_cost
from .evaluate import (
    RecordRef,
    ResultTable,
    Seq,
    candidates,
    derivation_star,
    evaluate,
    filter_holds,
    group_rows,
)
from .parser import QUERY_NAMESPACES, parse_query

__all__ = [
    "Filter", "FromClause", "GroupBy", "Join", "QUERY_NAMESPACES", "QueryAst", "RecordRef",
    "ResultTable", "Seq", "candidates", "derivation_star", "evaluate", "fields_for",
    "filter_holds", "group_rows", "parse_query", "query_cost",
]
