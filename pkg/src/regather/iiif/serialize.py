"""Presentation serialization: always emits the 3.0 shape."""

from __future__ import annotations

import json

from ..errors import InvariantViolation
from .validate import validate_presentation

PRESENTATION_CONTEXT = "http://iiif.io/api/presentation/3/context.json"


def _language_map_json(value):
    return {lang: list(strings) for lang, strings in value.items()}


def _node_json(node, is_root):
    doc = {}
    if is_root:
        doc["@context"] = PRESENTATION_CONTEXT
    doc["id"] = node.id
    doc["type"] = node.kind
    if node.label:
        doc["label"] = _language_map_json(node.label)
    if node.height is not None:
        doc["height"] = node.height
    if node.width is not None:
        doc["width"] = node.width
    if node.metadata:
        doc["metadata"] = [
            {"label": _language_map_json(label), "value": _language_map_json(value)}
            for label, value in node.metadata
        ]
    if node.required_statement is not None:
        label, value = node.required_statement
        doc["requiredStatement"] = {"label": _language_map_json(label), "value": _language_map_json(value)}
    if node.rights is not None:
        doc["rights"] = node.rights
    for key, value in node.extensions.items():
        doc[key] = value
    if node.kind != "Annotation":
        doc["items"] = [_node_json(child, False) for child in node.items]
    elif node.items:
        doc["items"] = [_node_json(child, False) for child in node.items]
    return doc


def presentation_json(resource):
    """Plain-dict form of the 3.0 document, without invariant checks."""
    return _node_json(resource, True)


def serialize_presentation(resource):
    """3.0 JSON bytes; parse(serialize(r)) is structurally equal to r."""
    report = validate_presentation(resource)
    if not report.ok:
        first = report.errors[0]
        raise InvariantViolation(f"{first.message} at {first.path}", findings=[f.as_dict() for f in report.errors])
    doc = presentation_json(resource)
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
