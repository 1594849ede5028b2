"""Typed tree of Presentation resources.

Collection -> Manifest -> Canvas -> AnnotationPage -> Annotation; unknown
JSON properties ride along in the extensions bag so imported documents can
be re-served losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from urllib.parse import urlparse

KINDS = ("Collection", "Manifest", "Canvas", "AnnotationPage", "Annotation")

ALLOWED_CHILDREN = {
    "Collection": {"Collection", "Manifest"},
    "Manifest": {"Canvas"},
    "Canvas": {"AnnotationPage"},
    "AnnotationPage": {"Annotation"},
    "Annotation": set(),
}


def is_absolute_uri(value):
    if not isinstance(value, str) or not value:
        return False
    parsed = urlparse(value)
    return bool(parsed.scheme) and bool(parsed.netloc or parsed.path)


@dataclass(frozen=True)
class ImageServiceRef:
    """Pointer at a remote Image API service; never rewritten by aggregation."""

    service_base: str
    profile: str = ""

    def __post_init__(self):
        object.__setattr__(self, "service_base", self.service_base.rstrip("/"))


@dataclass
class PresentationResource:
    id: str
    kind: str
    label: dict = field(default_factory=dict)  # language -> [strings]
    metadata: list = field(default_factory=list)  # [(label_map, value_map)]
    items: list = field(default_factory=list)
    image_services: list = field(default_factory=list)  # canvases only
    height: int | None = None
    width: int | None = None
    required_statement: tuple | None = None  # (label_map, value_map)
    rights: str | None = None
    extensions: dict = field(default_factory=dict)

    def child_kinds(self):
        return ALLOWED_CHILDREN.get(self.kind, set())

    def walk(self):
        yield self
        for child in self.items:
            yield from child.walk()

    def find(self, resource_id):
        for node in self.walk():
            if node.id == resource_id:
                return node
        return None

    def canvases(self):
        return [node for node in self.walk() if node.kind == "Canvas"]

    def first_label(self):
        for values in self.label.values():
            for value in values:
                return value
        return None


@dataclass(frozen=True)
class Finding:
    severity: str  # error | warning
    path: str
    message: str

    def as_dict(self):
        return {"severity": self.severity, "path": self.path, "message": self.message}


@dataclass
class ValidationReport:
    findings: list = field(default_factory=list)

    @property
    def errors(self):
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self):
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self):
        return not self.errors

    def as_dict(self):
        return {"ok": self.ok, "findings": [f.as_dict() for f in self.findings]}
