"""Structural validation: findings are data, not failures.

Error findings map one-to-one onto the type invariants (absolute ids,
distinct child ids, kind nesting, positive canvas dimensions); an
error-free report is required before registration.
"""

from __future__ import annotations

from .model import ALLOWED_CHILDREN, Finding, KINDS, ValidationReport, is_absolute_uri


def _check_node(node, path, findings):
    if node.kind not in KINDS:
        findings.append(Finding("error", path, f"unknown resource kind {node.kind!r}"))
        return
    if not is_absolute_uri(node.id):
        findings.append(Finding("error", path, f"id is not an absolute URI: {node.id!r}"))
    if node.kind == "Canvas":
        for dim, value in (("height", node.height), ("width", node.width)):
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                findings.append(Finding("error", path, f"canvas {dim} must be a positive integer, got {value!r}"))
    if node.kind in ("Manifest", "Collection") and not node.label:
        findings.append(Finding("warning", path, f"{node.kind} has no label"))

    seen_ids = {}
    for index, child in enumerate(node.items):
        child_path = f"{path}.items[{index}]"
        if child.kind in KINDS and child.kind not in ALLOWED_CHILDREN[node.kind]:
            findings.append(
                Finding("error", child_path, f"{child.kind} cannot be nested inside {node.kind}")
            )
        if child.id in seen_ids:
            findings.append(
                Finding("error", child_path, f"duplicate child id {child.id!r} (also at items[{seen_ids[child.id]}])")
            )
        else:
            seen_ids[child.id] = index
        _check_node(child, child_path, findings)


def validate_presentation(resource):
    findings = []
    _check_node(resource, "$", findings)
    return ValidationReport(findings=findings)
