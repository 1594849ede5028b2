"""Re-aggregation: new manifests and collections composed from registered
resources across institutions.

Zero-copy by construction: composed canvases mint new ids but carry the
source canvases' image bodies verbatim, and every new canvas records a
derivedFrom link back to its source.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .errors import CycleDetected, EmptySpec, InvalidParameter, KindMismatch, UnknownMember, UnknownResource
from .iiif.model import PresentationResource
from .iiif.serialize import presentation_json
from .rdf.terms import IRI, Literal, Quad, RDFS_LABEL
from .registry import content_digest
from .vocab import COLLECTION_GRAPH, VOCAB

MAX_COLLECTION_DEPTH = 16


@dataclass
class CompositionSpec:
    label: dict  # language -> [strings]
    members: list  # canvas URIs (manifest) or registry local URIs (collection)
    metadata: list = field(default_factory=list)

    def check(self):
        if not self.members:
            raise EmptySpec("composition requires at least one member")
        if len(set(self.members)) != len(self.members):
            raise InvalidParameter("composition members must be distinct")


class Composer:
    def __init__(self, platform):
        self._platform = platform

    @property
    def _registry(self):
        return self._platform.registry

    def compose_manifest(self, spec):
        spec.check()
        sources = []
        for member in spec.members:
            if member in self._registry._records:
                raise KindMismatch(f"{member} is a registered {self._registry.get(member).kind}, not a canvas")
            canvas = self._registry.find_canvas(member)
            if canvas is None:
                raise UnknownMember(f"{member} is not a canvas of any registered resource")
            if canvas.kind != "Canvas":
                raise KindMismatch(f"{member} is a {canvas.kind}, not a canvas")
            sources.append(canvas)

        base = self._platform.config.platform_base
        manifest_uri = self._platform.mint_uri("iiif", "manifest")
        manifest = PresentationResource(id=manifest_uri, kind="Manifest", label=dict(spec.label), metadata=list(spec.metadata))
        links = []
        for source in sources:
            canvas_uri = self._platform.mint_uri("iiif", "canvas")
            canvas = PresentationResource(
                id=canvas_uri,
                kind="Canvas",
                label=copy.deepcopy(source.label),
                height=source.height,
                width=source.width,
                image_services=list(source.image_services),
            )
            for page_index, page in enumerate(source.items):
                new_page = PresentationResource(id=f"{canvas_uri}/page/{page_index + 1}", kind="AnnotationPage")
                for anno_index, annotation in enumerate(page.items):
                    extensions = copy.deepcopy(annotation.extensions)
                    extensions["target"] = canvas_uri
                    new_page.items.append(
                        PresentationResource(
                            id=f"{canvas_uri}/anno/{anno_index + 1}",
                            kind="Annotation",
                            extensions=extensions,
                        )
                    )
                canvas.items.append(new_page)
            manifest.items.append(canvas)
            links.append({"derived": canvas_uri, "source": source.id, "link_kind": "derivedFrom"})

        doc = presentation_json(manifest)
        record = {
            "local_uri": manifest_uri,
            "source_uri": None,
            "fetched_at": self._platform.now(),
            "content_digest": content_digest(repr(doc).encode("utf-8")),
            "origin": "compose-manifest",
            "resource": doc,
        }
        self._platform.commit("resource.registered", {"record": record, "links": links})
        return self._registry.get(manifest_uri)

    def compose_collection(self, spec):
        spec.check()
        for member in spec.members:
            try:
                record = self._registry.get(member)
            except UnknownResource:
                if self._registry.find_canvas(member) is not None:
                    raise KindMismatch(f"{member} is a canvas; collections hold manifests and collections") from None
                raise UnknownMember(f"{member} is not a registered resource") from None
            if record.kind not in ("Manifest", "Collection"):
                raise KindMismatch(f"{member} is a {record.kind}; collections hold manifests and collections")
        self._check_acyclic(spec.members)

        collection_uri = self._platform.mint_uri("iiif", "collection")
        resource = PresentationResource(id=collection_uri, kind="Collection", label=dict(spec.label), metadata=list(spec.metadata))
        doc = presentation_json(resource)
        record = {
            "local_uri": collection_uri,
            "source_uri": None,
            "fetched_at": self._platform.now(),
            "content_digest": content_digest(repr(spec.members).encode("utf-8")),
            "origin": "compose-collection",
            "resource": doc,
            "members": list(spec.members),
        }
        self._platform.commit("resource.registered", {"record": record, "links": []})
        self._mirror_membership(collection_uri, spec)
        return self._registry.get(collection_uri)

    def _check_acyclic(self, members):
        """Walk member collections; revisits on the path or depth > 16 are cycles."""

        def walk(uri, path, depth):
            if depth > MAX_COLLECTION_DEPTH:
                raise CycleDetected(f"collection nesting exceeds {MAX_COLLECTION_DEPTH} levels at {uri}")
            if uri in path:
                raise CycleDetected(f"collection membership cycle through {uri}")
            record = self._registry._records.get(uri)
            if record is None or record.kind != "Collection":
                return
            for child in record.members:
                walk(child, path | {uri}, depth + 1)

        for member in members:
            walk(member, frozenset(), 1)

    def _mirror_membership(self, collection_uri, spec):
        quads = [Quad(IRI(collection_uri), IRI(VOCAB + "kind"), Literal("Collection"), COLLECTION_GRAPH)]
        label = next((v[0] for v in spec.label.values() if v), None)
        if label:
            quads.append(Quad(IRI(collection_uri), IRI(RDFS_LABEL), Literal(label), COLLECTION_GRAPH))
        for member in spec.members:
            quads.append(Quad(IRI(collection_uri), IRI(VOCAB + "member"), IRI(member), COLLECTION_GRAPH))
        self._platform.assert_quads(quads)

    def resolve(self, local_uri):
        """Materialize a registered resource; collections expand member references."""
        record = self._registry.get(local_uri)
        if record.kind != "Collection" or record.origin != "compose-collection":
            return record.resource
        resource = PresentationResource(
            id=record.resource.id,
            kind="Collection",
            label=dict(record.resource.label),
            metadata=list(record.resource.metadata),
        )
        for member in record.members:
            member_record = self._registry.get(member)
            resource.items.append(
                PresentationResource(
                    id=member,
                    kind=member_record.kind,
                    label=dict(member_record.resource.label),
                )
            )
        return resource
