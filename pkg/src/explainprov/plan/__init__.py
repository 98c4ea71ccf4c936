from .instantiate import MAX_DICT_DEPTH, fn_lookup_type, fn_noun_localname, instantiate
from .nodes import (
    AdjectivePhrase,
    Clause,
    CoordinatedPhrase,
    DictRef,
    Features,
    FunCall,
    IteratorNode,
    Literal,
    NounPhrase,
    Phrase,
    dict_refs,
    is_resolved,
    plan_size,
    variable_references,
    walk,
)
from .parse import FUNCTIONS, Dictionary, load_dictionary, parse_node, parse_plan

__all__ = [
    "AdjectivePhrase", "Clause", "CoordinatedPhrase", "DictRef", "Dictionary", "FUNCTIONS",
    "Features", "FunCall", "IteratorNode", "Literal", "MAX_DICT_DEPTH", "NounPhrase", "Phrase",
    "dict_refs", "fn_lookup_type", "fn_noun_localname", "instantiate", "is_resolved",
    "load_dictionary", "parse_node", "parse_plan", "plan_size", "variable_references", "walk",
]
