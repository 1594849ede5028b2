from .engine import DatasetView, QuerySolution, evaluate
from .sparql import parse_query
from .store import QuadStore
from .terms import BlankNode, IRI, Literal, Quad

__all__ = [
    "BlankNode",
    "DatasetView",
    "IRI",
    "Literal",
    "Quad",
    "QuadStore",
    "QuerySolution",
    "evaluate",
    "parse_query",
]
