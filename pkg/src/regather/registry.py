"""Registration of remote and local manifests, with provenance chains.

No image bytes ever enter this module: imports fetch and persist manifest
JSON only, and every reuse inherits the original image service addresses.
"""

from __future__ import annotations

import hashlib
import re
import time
from dataclasses import dataclass, field

import requests

from .errors import FetchFailed, UnknownResource, ValidationFailed
from .iiif.model import PresentationResource
from .iiif.parse import parse_presentation
from .iiif.serialize import presentation_json
from .iiif.validate import validate_presentation
from .rdf.terms import IRI, Literal, Quad, RDFS_LABEL
from .vocab import MANIFEST_GRAPH, VOCAB


@dataclass
class RegisteredResource:
    local_uri: str
    resource: PresentationResource
    fetched_at: str
    content_digest: str
    origin: str  # import | upload | compose-manifest | compose-collection
    source_uri: str | None = None
    members: list = field(default_factory=list)  # collection member local URIs

    @property
    def kind(self):
        return "Collection" if self.origin == "compose-collection" else self.resource.kind

    def summary(self):
        return {
            "local_uri": self.local_uri,
            "kind": self.kind,
            "label": self.resource.first_label(),
            "source_uri": self.source_uri,
            "fetched_at": self.fetched_at,
            "content_digest": self.content_digest,
            "origin": self.origin,
        }


@dataclass(frozen=True)
class ProvenanceLink:
    derived: str
    source: str
    link_kind: str  # derivedFrom | importedFrom

    def as_dict(self):
        return {"derived": self.derived, "source": self.source, "link_kind": self.link_kind}


def _slug(key):
    """Metadata label -> XML-name-safe predicate tail (keeps unicode letters)."""
    slug = re.sub(r"[^\w.\-]", "_", key.strip(), flags=re.UNICODE).lower()
    if not slug or re.match(r"[\d.\-]", slug[0]):
        slug = "k_" + slug
    return slug


def fetch_document(uri, timeout=30.0, retries=3, session=None):
    """GET with JSON accept header and exponential backoff; FetchFailed on exhaustion."""
    http = session or requests
    delay = 0.25
    last = None
    for attempt in range(retries):
        try:
            response = http.get(
                uri,
                headers={"Accept": 'application/json, application/ld+json;q=0.9'},
                timeout=timeout,
            )
            if response.status_code >= 400:
                raise FetchFailed(f"GET {uri} returned HTTP {response.status_code}", status=response.status_code)
            return response.content
        except FetchFailed as exc:
            last = exc
            if exc.details.get("status") in (404, 401, 403):
                raise  # retrying cannot help
        except requests.RequestException as exc:
            last = FetchFailed(f"GET {uri} failed: {exc}")
        if attempt < retries - 1:
            time.sleep(delay)
            delay *= 2
    raise last


def content_digest(data):
    return "sha256:" + hashlib.sha256(data).hexdigest()


class Registry:
    """Registration state; all mutations flow through platform events."""

    def __init__(self, platform):
        self._platform = platform
        self._records = {}  # local_uri -> RegisteredResource, insertion ordered
        self._by_source = {}  # source_uri -> local_uri
        self._canvas_owner = {}  # canvas id -> owning local_uri
        self._resource_ids = {}  # document-internal id -> local_uri
        self._links = {}  # derived uri -> ProvenanceLink

    # --- lookups ---

    def get(self, local_uri):
        record = self._records.get(local_uri)
        if record is None:
            raise UnknownResource(f"{local_uri} is not registered")
        return record

    def records(self):
        return list(self._records.values())

    def is_known(self, uri):
        return uri in self._records or uri in self._canvas_owner or uri in self._resource_ids

    def canvas_owner(self, canvas_uri):
        return self._canvas_owner.get(canvas_uri)

    def find_canvas(self, canvas_uri):
        owner = self._canvas_owner.get(canvas_uri)
        if owner is None:
            return None
        return self._records[owner].resource.find(canvas_uri)

    def link_for(self, derived_uri):
        return self._links.get(derived_uri)

    def list_registered(self, kind=None, source=None):
        out = []
        for record in self._records.values():
            if kind is not None and record.kind != kind:
                continue
            if source is not None and record.source_uri != source:
                continue
            out.append(record.summary())
        return out

    # --- operations (journaled by the platform) ---

    def import_manifest(self, uri):
        if not uri.startswith(("http://", "https://")):
            raise FetchFailed(f"import requires an absolute http(s) URI, got {uri!r}")
        fetch = self._platform.config.fetch
        data = fetch_document(uri, timeout=fetch.timeout, retries=fetch.retries)
        digest = content_digest(data)
        existing = self._by_source.get(uri)
        if existing is not None and self._records[existing].content_digest == digest:
            return self._records[existing]
        resource = parse_presentation(data)
        report = validate_presentation(resource)
        if not report.ok:
            raise ValidationFailed(f"{uri} failed validation", report=report)
        local_uri = self._platform.mint_uri("iiif", resource.kind.lower())
        record = {
            "local_uri": local_uri,
            "source_uri": uri,
            "fetched_at": self._platform.now(),
            "content_digest": digest,
            "origin": "import",
            "resource": presentation_json(resource),
        }
        link = {"derived": local_uri, "source": uri, "link_kind": "importedFrom"}
        self._platform.commit("resource.registered", {"record": record, "links": [link]})
        return self._records[local_uri]

    def upload_manifest(self, document):
        if isinstance(document, str):
            document = document.encode("utf-8")
        resource = parse_presentation(document)
        report = validate_presentation(resource)
        if not report.ok:
            raise ValidationFailed("uploaded document failed validation", report=report)
        local_uri = self._platform.mint_uri("iiif", resource.kind.lower())
        record = {
            "local_uri": local_uri,
            "source_uri": None,
            "fetched_at": self._platform.now(),
            "content_digest": content_digest(document),
            "origin": "upload",
            "resource": presentation_json(resource),
        }
        self._platform.commit("resource.registered", {"record": record, "links": []})
        return self._records[local_uri]

    def trace_gene_chain(self, uri):
        """Ancestry links from a resource or canvas back to its import, oldest last."""
        if not self.is_known(uri) and uri not in self._links:
            raise UnknownResource(f"{uri} is not registered and is not a derived canvas")
        chain = []
        current = uri
        seen = set()
        while current not in seen:
            seen.add(current)
            link = self._links.get(current)
            if link is not None:
                chain.append(link)
                current = link.source
                continue
            owner = self._canvas_owner.get(current)
            if owner is not None and owner != current:
                current = owner
                continue
            break
        return chain

    # --- event application (deterministic; also used on replay) ---

    def apply_registered(self, data):
        payload = data["record"]
        resource = parse_presentation(payload["resource"])
        record = RegisteredResource(
            local_uri=payload["local_uri"],
            source_uri=payload.get("source_uri"),
            resource=resource,
            fetched_at=payload["fetched_at"],
            content_digest=payload["content_digest"],
            origin=payload["origin"],
            members=payload.get("members", []),
        )
        self._records[record.local_uri] = record
        if record.source_uri:
            self._by_source[record.source_uri] = record.local_uri
        self._resource_ids[resource.id] = record.local_uri
        for canvas in resource.canvases():
            self._canvas_owner.setdefault(canvas.id, record.local_uri)
        for link_data in data.get("links", []):
            link = ProvenanceLink(**link_data)
            self._links[link.derived] = link
        self._mirror_metadata(record)

    def _mirror_metadata(self, record):
        subject = IRI(record.local_uri)
        quads = [
            Quad(subject, IRI(VOCAB + "kind"), Literal(record.kind), MANIFEST_GRAPH),
            Quad(subject, IRI(VOCAB + "describes"), IRI(record.resource.id), MANIFEST_GRAPH),
        ]
        label = record.resource.first_label()
        if label:
            quads.append(Quad(subject, IRI(RDFS_LABEL), Literal(label), MANIFEST_GRAPH))
        if record.source_uri:
            quads.append(Quad(subject, IRI(VOCAB + "sourceUri"), IRI(record.source_uri), MANIFEST_GRAPH))
        for label_map, value_map in record.resource.metadata:
            key = next((v[0] for v in label_map.values() if v), None)
            value = next((v[0] for v in value_map.values() if v), None)
            if key and value:
                quads.append(Quad(subject, IRI(VOCAB + "meta/" + _slug(key)), Literal(value), MANIFEST_GRAPH))
        self._platform.store.assert_quads(quads)

    # --- snapshot state ---

    def state_dict(self):
        return {
            "records": [
                {
                    "local_uri": r.local_uri,
                    "source_uri": r.source_uri,
                    "fetched_at": r.fetched_at,
                    "content_digest": r.content_digest,
                    "origin": r.origin,
                    "members": r.members,
                    "resource": presentation_json(r.resource),
                }
                for r in self._records.values()
            ],
            "links": [link.as_dict() for link in self._links.values()],
        }

    def load_state(self, state):
        for payload in state["records"]:
            resource = parse_presentation(payload["resource"])
            record = RegisteredResource(
                local_uri=payload["local_uri"],
                source_uri=payload.get("source_uri"),
                resource=resource,
                fetched_at=payload["fetched_at"],
                content_digest=payload["content_digest"],
                origin=payload["origin"],
                members=payload.get("members", []),
            )
            self._records[record.local_uri] = record
            if record.source_uri:
                self._by_source[record.source_uri] = record.local_uri
            self._resource_ids[resource.id] = record.local_uri
            for canvas in resource.canvases():
                self._canvas_owner.setdefault(canvas.id, record.local_uri)
        for link_data in state["links"]:
            link = ProvenanceLink(**link_data)
            self._links[link.derived] = link
