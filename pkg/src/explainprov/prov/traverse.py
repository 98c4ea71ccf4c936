"""Graph traversal over PROV documents."""

from __future__ import annotations

from collections import defaultdict, deque

from ..errors import ProvError
from .model import ProvDocument, QualifiedName, Relation


def undirected_reach(doc: ProvDocument, start: QualifiedName | str) -> set[QualifiedName]:
    """Ids of every statement connected to ``start``.

    Each relation is an undirected hyperedge joining its field values, so a
    relation is reachable from each element it names and vice versa.  Field
    values that name no statement (dangling references) still link the
    relations that share them.
    """
    start_iri = start if isinstance(start, str) else start.iri
    if doc.get(start_iri) is None:
        raise ProvError(f"unknown start id {start}")

    # bipartite adjacency: node iri <-> relation iri
    adjacent: dict[str, list[str]] = defaultdict(list)
    for rel in doc.relations:
        for _, q in rel.fields:
            adjacent[rel.id.iri].append(q.iri)
            adjacent[q.iri].append(rel.id.iri)

    seen = {start_iri}
    queue = deque([start_iri])
    while queue:
        node = queue.popleft()
        for nxt in adjacent.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return {st.id for st in doc.statements if st.id.iri in seen}


def components(doc: ProvDocument) -> list[set[QualifiedName]]:
    """Partition the document's statements into connected components."""
    remaining = [st.id for st in doc.statements]
    done: set[str] = set()
    parts = []
    for ident in remaining:
        if ident.iri in done:
            continue
        part = undirected_reach(doc, ident)
        done.update(q.iri for q in part)
        parts.append(part)
    return parts


def dangling_references(doc: ProvDocument) -> list[tuple[Relation, str, QualifiedName]]:
    """Relation fields naming ids absent from the document."""
    out = []
    for rel in doc.relations:
        for name, q in rel.fields:
            if q not in doc:
                out.append((rel, name, q))
    return out
