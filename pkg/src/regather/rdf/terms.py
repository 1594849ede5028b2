"""RDF term and quad model: the universal storage atom."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MalformedTerm

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
DCT_NS = "http://purl.org/dc/terms/"

RDF_TYPE = RDF_NS + "type"
RDF_FIRST = RDF_NS + "first"
RDF_REST = RDF_NS + "rest"
RDF_NIL = RDF_NS + "nil"
RDFS_LABEL = RDFS_NS + "label"
RDFS_COMMENT = RDFS_NS + "comment"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"
RDFS_DOMAIN = RDFS_NS + "domain"
RDFS_RANGE = RDFS_NS + "range"
RDFS_CLASS = RDFS_NS + "Class"
OWL_CLASS = OWL_NS + "Class"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"
OWL_SAMEAS = OWL_NS + "sameAs"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_FLOAT = XSD + "float"
XSD_BOOLEAN = XSD + "boolean"

NUMERIC_DATATYPES = frozenset(
    {XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE, XSD_FLOAT,
     XSD + "int", XSD + "long", XSD + "short", XSD + "byte",
     XSD + "nonNegativeInteger", XSD + "positiveInteger"}
)


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __str__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __str__(self):
        return "_:" + self.label


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __str__(self):
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'

    def is_numeric(self):
        return self.datatype in NUMERIC_DATATYPES

    def numeric_value(self):
        """Python number for numeric literals; raises ValueError otherwise."""
        if self.datatype == XSD_INTEGER or (
            self.datatype in NUMERIC_DATATYPES and self.datatype not in (XSD_DECIMAL, XSD_DOUBLE, XSD_FLOAT)
        ):
            return int(self.lexical)
        if self.is_numeric():
            return float(self.lexical)
        raise ValueError(f"not a numeric literal: {self}")

    def is_stringish(self):
        return self.datatype is None or self.datatype == XSD_STRING


Term = IRI | BlankNode | Literal


@dataclass(frozen=True, slots=True)
class Quad:
    """Subject/predicate/object statement in a named graph."""

    subject: IRI | BlankNode
    predicate: IRI
    object: Term
    graph: str

    def triple(self):
        return (self.subject, self.predicate, self.object)


def check_quad(quad):
    """Enforce term invariants; raises MalformedTerm."""
    if not isinstance(quad.subject, (IRI, BlankNode)):
        raise MalformedTerm(f"subject must be an IRI or blank node, got {quad.subject!r}")
    if not isinstance(quad.predicate, IRI):
        raise MalformedTerm(f"predicate must be an IRI, got {quad.predicate!r}")
    if not isinstance(quad.object, (IRI, BlankNode, Literal)):
        raise MalformedTerm(f"object must be a term, got {quad.object!r}")
    if isinstance(quad.subject, IRI) and not quad.subject.value:
        raise MalformedTerm("empty subject IRI")
    if not quad.predicate.value:
        raise MalformedTerm("empty predicate IRI")


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_literal(text):
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def nt_term(term):
    """Canonical N-Triples spelling of a term (also used by the journal)."""
    if isinstance(term, IRI):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{escape_literal(term.lexical)}"'
        if term.language:
            return body + "@" + term.language
        if term.datatype:
            return body + f"^^<{term.datatype}>"
        return body
    raise MalformedTerm(f"not a term: {term!r}")
