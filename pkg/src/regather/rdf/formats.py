"""Format registry: exactly four data dump formats, nothing else."""

from __future__ import annotations

from ..errors import UnknownFormat
from .ntriples import dump_ntriples, parse_ntriples
from .rdfjson import dump_rdfjson, parse_rdfjson
from .rdfxml import dump_rdfxml, parse_rdfxml
from .turtle import dump_turtle, parse_turtle

_ALIASES = {
    "nt": "nt", "ntriples": "nt",
    "ttl": "ttl", "turtle": "ttl",
    "rdfxml": "rdfxml", "xml": "rdfxml",
    "rdfjson": "rdfjson",
}

_WRITERS = {"nt": dump_ntriples, "ttl": dump_turtle, "rdfxml": dump_rdfxml, "rdfjson": dump_rdfjson}
_READERS = {"nt": parse_ntriples, "ttl": parse_turtle, "rdfxml": parse_rdfxml, "rdfjson": parse_rdfjson}

MEDIA_TYPES = {
    "nt": "application/n-triples",
    "ttl": "text/turtle",
    "rdfxml": "application/rdf+xml",
    "rdfjson": "application/json",
}

FORMAT_NAMES = ("rdfxml", "ttl", "rdfjson", "nt")


def normalize_format(name):
    """Map a user-facing format name to its canonical key; UnknownFormat otherwise."""
    if not isinstance(name, str):
        raise UnknownFormat(f"unknown dump format: {name!r}")
    key = name.strip().lower().replace("/", "").replace("-", "").replace(" ", "").replace(".", "")
    if key not in _ALIASES:
        raise UnknownFormat(f"unknown dump format {name!r}; supported: RDF/XML, TTL, RDF/JSON, NT")
    return _ALIASES[key]


def dump_triples(triples, format_name):
    return _WRITERS[normalize_format(format_name)](triples)


def parse_triples(data, format_name):
    return _READERS[normalize_format(format_name)](data)
