"""The three-layer annotation model.

Image layer copies descriptive metadata onto a manifest or canvas as
triples; the object layer anchors real-world objects (seals, characters)
to canvas regions; the semantic layer links annotations and objects into
external datasets. Every annotation's statements live in the annotation
graph; semantic links are mirrored into the linking graph as well.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EmptyBody,
    InvalidParameter,
    NotAbsoluteUri,
    RegionOutOfBounds,
    UnknownResource,
    UnknownSubject,
)
from .iiif.model import is_absolute_uri
from .rdf.ntriples import parse_ntriples
from .rdf.terms import IRI, Literal, Quad, RDF_TYPE, RDFS_NS, nt_term
from .vocab import ANNOTATION_GRAPH, LINKING_GRAPH

WEB_ANNO_CONTEXT = "http://www.w3.org/ns/anno.jsonld"
MEDIA_FRAGS = "http://www.w3.org/TR/media-frags/"

_MOTIVATIONS = {"image": "describing", "object": "identifying", "semantic": "linking"}


@dataclass(frozen=True)
class RegionSelector:
    kind: str  # pixel | pct
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.kind not in ("pixel", "pct"):
            raise InvalidParameter(f"unknown region selector kind {self.kind!r}")
        if self.w <= 0 or self.h <= 0:
            raise InvalidParameter("region selector needs positive width and height")

    def fragment(self):
        values = ",".join(_plain(v) for v in (self.x, self.y, self.w, self.h))
        if self.kind == "pct":
            return f"xywh=percent:{values}"
        return f"xywh={values}"

    @classmethod
    def from_fragment(cls, text):
        if not text.startswith("xywh="):
            raise InvalidParameter(f"not a media fragment selector: {text!r}")
        body = text[len("xywh="):]
        kind = "pixel"
        if body.startswith("percent:"):
            kind = "pct"
            body = body[len("percent:"):]
        elif body.startswith("pixel:"):
            body = body[len("pixel:"):]
        parts = body.split(",")
        if len(parts) != 4:
            raise InvalidParameter(f"selector needs 4 numbers: {text!r}")
        return cls(kind, *(float(p) if "." in p else int(p) for p in parts))

    def as_dict(self):
        return {"kind": self.kind, "x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], data["x"], data["y"], data["w"], data["h"])


def _plain(value):
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))


@dataclass
class LayeredAnnotation:
    id: str
    layer: str  # image | object | semantic
    target: str
    body: list  # list[Quad]
    created_at: str
    creator: str
    region: RegionSelector | None = None
    object_uri: str | None = None
    link_predicate: str | None = None
    link_target: str | None = None
    supersedes: str | None = None

    def occurrences_entry(self):
        return (self.target, self.region)

    def as_web_annotation(self):
        target = self.target
        if self.region is not None:
            target = {
                "source": self.target,
                "selector": {
                    "type": "FragmentSelector",
                    "conformsTo": MEDIA_FRAGS,
                    "value": self.region.fragment(),
                },
            }
        doc = {
            "@context": WEB_ANNO_CONTEXT,
            "id": self.id,
            "type": "Annotation",
            "motivation": _MOTIVATIONS[self.layer],
            "created": self.created_at,
            "creator": self.creator,
            "target": target,
            "body": [
                {
                    "type": "TextualBody",
                    "format": "application/n-triples",
                    "value": f"{nt_term(q.subject)} {nt_term(q.predicate)} {nt_term(q.object)} .",
                }
                for q in self.body
            ],
            "regather:layer": self.layer,
        }
        if self.object_uri:
            doc["regather:object"] = self.object_uri
        if self.link_predicate:
            doc["regather:linkPredicate"] = self.link_predicate
            doc["regather:linkTarget"] = self.link_target
        if self.supersedes:
            doc["regather:supersedes"] = self.supersedes
        return doc


def _term_from(value):
    if isinstance(value, (IRI, Literal)):
        return value
    if isinstance(value, str) and is_absolute_uri(value) and "://" in value:
        return IRI(value)
    return Literal(str(value))


class AnnotationLayers:
    def __init__(self, platform):
        self._platform = platform
        self._by_id = {}
        self._by_object = {}
        self._by_target = {}

    # --- lookups ---

    def get(self, annotation_id):
        annotation = self._by_id.get(annotation_id)
        if annotation is None:
            raise UnknownResource(f"annotation {annotation_id} does not exist")
        return annotation

    def all(self):
        return list(self._by_id.values())

    def for_target(self, target):
        return [self._by_id[a] for a in self._by_target.get(target, [])]

    def object_known(self, object_uri):
        return object_uri in self._by_object

    def find_object_occurrences(self, object_uri):
        """(canvas, region) pairs for object-layer annotations, creation order."""
        out = []
        for annotation_id in self._by_object.get(object_uri, []):
            annotation = self._by_id[annotation_id]
            if annotation.layer == "object":
                out.append(annotation.occurrences_entry())
        return out

    def object_labels(self, object_uri):
        labels = []
        for annotation_id in self._by_object.get(object_uri, []):
            for quad in self._by_id[annotation_id].body:
                if isinstance(quad.object, Literal) and quad.predicate.value.endswith(("label", "name")):
                    labels.append(quad.object.lexical)
        return labels

    def semantic_links(self, subject_uri):
        return [
            (a.link_predicate, a.link_target)
            for a in self._by_id.values()
            if a.layer == "semantic" and a.target == subject_uri
        ]

    # --- operations ---

    def annotate_image_layer(self, target, metadata, creator="anonymous"):
        if not self._platform.registry.is_known(target):
            raise UnknownResource(f"{target} is not a registered manifest or canvas")
        pairs = list(metadata)
        if not pairs:
            raise EmptyBody("image-layer annotation requires at least one metadata pair")
        annotation_id = self._platform.mint_uri("annotation")
        body = [
            {"s": target, "p": predicate, "o": nt_term(_term_from(value))}
            for predicate, value in pairs
        ]
        data = {
            "id": annotation_id,
            "layer": "image",
            "target": target,
            "region": None,
            "body": body,
            "object_uri": None,
            "link_predicate": None,
            "link_target": None,
            "creator": creator,
            "created_at": self._platform.now(),
        }
        self._platform.commit("annotation.created", data)
        return self._by_id[annotation_id]

    def annotate_object_layer(self, canvas, region, object_class, object_uri=None, body=(), creator="anonymous"):
        node = self._platform.registry.find_canvas(canvas)
        if node is None:
            raise UnknownResource(f"{canvas} is not a canvas of any registered resource")
        self._check_bounds(node, region)
        if object_uri is None:
            object_uri = self._platform.mint_uri("object")
        annotation_id = self._platform.mint_uri("annotation")
        statements = [{"s": object_uri, "p": RDF_TYPE, "o": nt_term(IRI(object_class))}]
        for predicate, value in body:
            statements.append({"s": object_uri, "p": predicate, "o": nt_term(_term_from(value))})
        data = {
            "id": annotation_id,
            "layer": "object",
            "target": canvas,
            "region": region.as_dict(),
            "body": statements,
            "object_uri": object_uri,
            "link_predicate": None,
            "link_target": None,
            "creator": creator,
            "created_at": self._platform.now(),
        }
        self._platform.commit("annotation.created", data)
        return self._by_id[annotation_id]

    def annotate_semantic_layer(self, subject, predicate, external, creator="anonymous"):
        if subject not in self._by_id and subject not in self._by_object:
            raise UnknownSubject(f"{subject} is not a local annotation or annotated object")
        if not is_absolute_uri(external):
            raise NotAbsoluteUri(f"link target must be an absolute URI, got {external!r}")
        for annotation in self._by_id.values():
            if (
                annotation.layer == "semantic"
                and annotation.target == subject
                and annotation.link_predicate == predicate
                and annotation.link_target == external
            ):
                return annotation  # idempotent duplicate
        annotation_id = self._platform.mint_uri("annotation")
        data = {
            "id": annotation_id,
            "layer": "semantic",
            "target": subject,
            "region": None,
            "body": [{"s": subject, "p": predicate, "o": nt_term(IRI(external))}],
            "object_uri": None,
            "link_predicate": predicate,
            "link_target": external,
            "creator": creator,
            "created_at": self._platform.now(),
        }
        self._platform.commit("annotation.created", data)
        return self._by_id[annotation_id]

    def import_web_annotation(self, document, creator=None):
        """Accept a Web Annotation JSON document or an AnnotationPage batch;
        returns the stored annotations (one per input annotation)."""
        if isinstance(document, (bytes, str)):
            import json

            document = json.loads(document)
        if document.get("type") == "AnnotationPage":
            out = []
            for item in document.get("items", []):
                out.extend(self.import_web_annotation(item, creator=creator))
            return out
        if document.get("type") != "Annotation":
            raise InvalidParameter("expected an Annotation or AnnotationPage document")

        layer = document.get("regather:layer")
        if layer is None:
            layer = {"describing": "image", "identifying": "object", "linking": "semantic"}.get(
                document.get("motivation"))
        if layer not in ("image", "object", "semantic"):
            raise InvalidParameter(f"cannot determine annotation layer of {document.get('id')!r}")
        who = creator or document.get("creator") or "imported"

        target = document.get("target")
        region = None
        if isinstance(target, dict):
            selector = (target.get("selector") or {}).get("value")
            if selector:
                region = RegionSelector.from_fragment(selector)
            target = target.get("source")

        pairs = []
        for body in document.get("body", []):
            if isinstance(body, dict) and body.get("format") == "application/n-triples":
                ((_, p, o),) = parse_ntriples(body["value"])
                pairs.append((p.value, o))
            elif isinstance(body, dict) and body.get("type") == "TextualBody":
                pairs.append((RDFS_NS + "comment", Literal(body.get("value", ""))))

        if layer == "image":
            return [self.annotate_image_layer(target, pairs, creator=who)]
        if layer == "object":
            if region is None:
                raise InvalidParameter("object-layer annotation requires a region selector")
            object_class = document.get("regather:objectClass")
            body_pairs = []
            for predicate, value in pairs:
                if predicate == RDF_TYPE and isinstance(value, IRI) and object_class is None:
                    object_class = value.value
                else:
                    body_pairs.append((predicate, value))
            if object_class is None:
                raise InvalidParameter("object-layer annotation requires an object class")
            return [self.annotate_object_layer(
                target, region, object_class,
                object_uri=document.get("regather:object"), body=body_pairs, creator=who)]
        predicate = document.get("regather:linkPredicate")
        external = document.get("regather:linkTarget")
        if predicate is None and pairs:
            predicate, value = pairs[0]
            external = value.value if isinstance(value, IRI) else str(value)
        return [self.annotate_semantic_layer(target, predicate, external, creator=who)]

    def _check_bounds(self, canvas, region):
        if region.kind == "pct":
            if region.x + region.w > 100 or region.y + region.h > 100:
                raise RegionOutOfBounds(f"{region.fragment()} exceeds 100%")
            return
        width = canvas.width if isinstance(canvas.width, int) else None
        height = canvas.height if isinstance(canvas.height, int) else None
        if width is None or height is None:
            return
        if region.x + region.w > width or region.y + region.h > height:
            raise RegionOutOfBounds(
                f"{region.fragment()} exceeds canvas bounds {width}x{height}"
            )

    # --- event application ---

    def apply_created(self, data):
        region = RegionSelector.from_dict(data["region"]) if data.get("region") else None
        body = []
        for statement in data["body"]:
            subject = IRI(statement["s"])
            predicate = IRI(statement["p"])
            (_, _, obj), = parse_ntriples(f"<urn:x> <urn:y> {statement['o']} .")
            body.append(Quad(subject, predicate, obj, ANNOTATION_GRAPH))
        annotation = LayeredAnnotation(
            id=data["id"],
            layer=data["layer"],
            target=data["target"],
            region=region,
            body=body,
            object_uri=data.get("object_uri"),
            link_predicate=data.get("link_predicate"),
            link_target=data.get("link_target"),
            creator=data["creator"],
            created_at=data["created_at"],
            supersedes=data.get("supersedes"),
        )
        self._by_id[annotation.id] = annotation
        self._by_target.setdefault(annotation.target, []).append(annotation.id)
        if annotation.object_uri:
            self._by_object.setdefault(annotation.object_uri, []).append(annotation.id)
        self._platform.store.assert_quads(body)
        if annotation.layer == "semantic":
            linking = [Quad(q.subject, q.predicate, q.object, LINKING_GRAPH) for q in body]
            self._platform.store.assert_quads(linking)

    # --- snapshot state ---

    def state_dict(self):
        return {
            "annotations": [
                {
                    "id": a.id,
                    "layer": a.layer,
                    "target": a.target,
                    "region": a.region.as_dict() if a.region else None,
                    "body": [
                        {"s": q.subject.value, "p": q.predicate.value, "o": nt_term(q.object)}
                        for q in a.body
                    ],
                    "object_uri": a.object_uri,
                    "link_predicate": a.link_predicate,
                    "link_target": a.link_target,
                    "creator": a.creator,
                    "created_at": a.created_at,
                    "supersedes": a.supersedes,
                }
                for a in self._by_id.values()
            ]
        }

    def load_state(self, state):
        for data in state["annotations"]:
            self.apply_created(data)
