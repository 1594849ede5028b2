"""RDF/JSON reader/writer (the subject → predicate → value-array mapping)."""

from __future__ import annotations

import json

from ..errors import ParseError
from .terms import BlankNode, IRI, Literal


def _encode_object(term):
    if isinstance(term, IRI):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": "_:" + term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.language:
        out["lang"] = term.language
    elif term.datatype:
        out["datatype"] = term.datatype
    return out


def dump_rdfjson(triples):
    doc = {}
    for s, p, o in sorted(triples, key=lambda t: (str(t[0]), t[1].value, str(t[2]))):
        skey = "_:" + s.label if isinstance(s, BlankNode) else s.value
        doc.setdefault(skey, {}).setdefault(p.value, []).append(_encode_object(o))
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _decode_object(entry):
    if not isinstance(entry, dict) or "type" not in entry or "value" not in entry:
        raise ParseError(f"malformed RDF/JSON value entry: {entry!r}")
    kind, value = entry["type"], entry["value"]
    if kind == "uri":
        return IRI(value)
    if kind == "bnode":
        return BlankNode(value[2:] if value.startswith("_:") else value)
    if kind == "literal":
        return Literal(value, datatype=entry.get("datatype"), language=entry.get("lang"))
    raise ParseError(f"unknown RDF/JSON value type {kind!r}")


def parse_rdfjson(data):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not well-formed JSON: {exc.msg}", position=exc.pos, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("RDF/JSON document must be a JSON object")
    triples = []
    for skey, predicates in doc.items():
        subject = BlankNode(skey[2:]) if skey.startswith("_:") else IRI(skey)
        if not isinstance(predicates, dict):
            raise ParseError(f"subject entry for {skey!r} must be an object")
        for pred, values in predicates.items():
            if not isinstance(values, list):
                raise ParseError(f"values of {pred!r} must be an array")
            for entry in values:
                triples.append((subject, IRI(pred), _decode_object(entry)))
    return triples
