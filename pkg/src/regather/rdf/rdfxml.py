"""RDF/XML reader/writer.

Covers the striped syntax used in practice: rdf:Description and typed node
elements, rdf:about / rdf:nodeID / rdf:resource, rdf:datatype, inherited
xml:lang, rdf:parseType="Resource", nested node elements, and property
attributes. rdf:parseType="Literal" and rdf:ID are rejected.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from ..errors import ParseError
from .terms import BlankNode, IRI, Literal, RDF_NS, RDF_TYPE

_RDF = "{" + RDF_NS + "}"
_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"
_NCNAME_TAIL = re.compile(r"[^\W\d][\w.\-]*$", re.UNICODE)


def _split_iri(iri):
    """Split an IRI into (namespace, NCName local part) for QName emission."""
    m = _NCNAME_TAIL.search(iri)
    if not m or m.start() == 0:
        return None
    head = iri[:m.start()]
    if head.endswith(("#", "/", ":")):
        return head, iri[m.start():]
    return None


def _expand_tag(tag):
    if not tag.startswith("{"):
        raise ParseError(f"unqualified element name {tag!r}")
    ns, local = tag[1:].split("}", 1)
    return ns + local


class _RdfXmlReader:
    def __init__(self):
        self.triples = []
        self._anon = 0

    def _fresh_blank(self):
        self._anon += 1
        return BlankNode(f"genid{self._anon}")

    def read(self, data):
        if isinstance(data, str):
            data = data.encode("utf-8")
        try:
            root = ET.fromstring(data)
        except ET.ParseError as exc:
            raise ParseError(f"not well-formed XML: {exc}", line=exc.position[0], column=exc.position[1]) from exc
        if root.tag != _RDF + "RDF":
            raise ParseError(f"root element must be rdf:RDF, got {root.tag!r}")
        lang = root.get(_XML_LANG)
        for child in root:
            self._node_element(child, lang)
        return self.triples

    def _subject_of(self, element):
        about = element.get(_RDF + "about")
        node_id = element.get(_RDF + "nodeID")
        if element.get(_RDF + "ID") is not None:
            raise ParseError("rdf:ID is not supported; use rdf:about")
        if about is not None:
            return IRI(about)
        if node_id is not None:
            return BlankNode(node_id)
        return self._fresh_blank()

    def _node_element(self, element, lang):
        lang = element.get(_XML_LANG, lang)
        subject = self._subject_of(element)
        tag_iri = _expand_tag(element.tag)
        if tag_iri != RDF_NS + "Description":
            self.triples.append((subject, IRI(RDF_TYPE), IRI(tag_iri)))
        for name, value in element.attrib.items():
            if name.startswith(_RDF) or name == _XML_LANG:
                continue
            # property attribute shorthand
            self.triples.append((subject, IRI(_expand_tag(name)), Literal(value, language=lang)))
        for prop in element:
            self._property_element(subject, prop, lang)
        return subject

    def _property_element(self, subject, element, lang):
        lang = element.get(_XML_LANG, lang)
        predicate = IRI(_expand_tag(element.tag))
        resource = element.get(_RDF + "resource")
        node_id = element.get(_RDF + "nodeID")
        datatype = element.get(_RDF + "datatype")
        parse_type = element.get(_RDF + "parseType")
        children = list(element)

        if parse_type == "Resource":
            node = self._fresh_blank()
            self.triples.append((subject, predicate, node))
            for prop in children:
                self._property_element(node, prop, lang)
            return
        if parse_type is not None:
            raise ParseError(f"rdf:parseType={parse_type!r} is not supported")
        if resource is not None:
            self.triples.append((subject, predicate, IRI(resource)))
            return
        if node_id is not None:
            self.triples.append((subject, predicate, BlankNode(node_id)))
            return
        if children:
            if len(children) != 1:
                raise ParseError(f"property element {element.tag!r} has multiple node children")
            obj = self._node_element(children[0], lang)
            self.triples.append((subject, predicate, obj))
            return
        text = element.text or ""
        if datatype is not None:
            self.triples.append((subject, predicate, Literal(text, datatype=datatype)))
        else:
            self.triples.append((subject, predicate, Literal(text, language=lang.lower() if lang else None)))


def parse_rdfxml(data):
    """Parse an RDF/XML document into a list of (s, p, o) triples."""
    return _RdfXmlReader().read(data)


_XML_FORBIDDEN = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f]")


def _xml_text(text):
    if _XML_FORBIDDEN.search(text):
        raise ParseError("literal contains control characters not representable in XML 1.0")
    # carriage returns must be character references or parsers normalize them away
    return escape(text).replace("\r", "&#13;")


def dump_rdfxml(triples):
    """Serialize triples as rdf:Description elements, one per subject."""
    triples = sorted(triples, key=lambda t: (str(t[0]), t[1].value, str(t[2])))
    namespaces = {RDF_NS: "rdf"}
    order = []
    for _, p, _ in triples:
        split = _split_iri(p.value)
        if split is None:
            raise ParseError(f"predicate {p.value!r} cannot be written as an XML QName")
        ns = split[0]
        if ns not in namespaces:
            namespaces[ns] = f"ns{len(namespaces)}"
            order.append(ns)

    by_subject = {}
    subject_order = []
    for s, p, o in triples:
        if s not in by_subject:
            by_subject[s] = []
            subject_order.append(s)
        by_subject[s].append((p, o))

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    attrs = [f'xmlns:rdf="{RDF_NS}"'] + [f'xmlns:{namespaces[ns]}="{escape(ns)}"' for ns in order]
    lines.append(f"<rdf:RDF {' '.join(attrs)}>")
    for subject in subject_order:
        if isinstance(subject, IRI):
            lines.append(f"  <rdf:Description rdf:about={quoteattr(subject.value)}>")
        else:
            lines.append(f"  <rdf:Description rdf:nodeID={quoteattr(subject.label)}>")
        for p, o in by_subject[subject]:
            ns, local = _split_iri(p.value)
            qname = f"{namespaces[ns]}:{local}"
            if isinstance(o, IRI):
                lines.append(f"    <{qname} rdf:resource={quoteattr(o.value)}/>")
            elif isinstance(o, BlankNode):
                lines.append(f"    <{qname} rdf:nodeID={quoteattr(o.label)}/>")
            else:
                extra = ""
                if o.language:
                    extra = f" xml:lang={quoteattr(o.language)}"
                elif o.datatype:
                    extra = f" rdf:datatype={quoteattr(o.datatype)}"
                lines.append(f"    <{qname}{extra}>{_xml_text(o.lexical)}</{qname}>")
        lines.append("  </rdf:Description>")
    lines.append("</rdf:RDF>")
    return "\n".join(lines) + "\n"
