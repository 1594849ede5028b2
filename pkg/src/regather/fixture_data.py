"""Desk-scale fixture corpus: four stand-in institutions, level-0 image
trees, and paired 2.x/3.0 manifests.

Everything is generated locally so no test ever touches a real archive;
the level-0 tree holds exactly the derivatives the manifests reference.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

INSTITUTIONS = (
    ("keio", "Keio Institute fixture scrolls", 2),
    ("harvard-yenching", "Harvard-Yenching fixture sutra", 2),
    ("kyoto", "Kyoto University fixture archive", 2),
    ("chester-beatty", "Chester Beatty fixture codex", 2),
)

SUTRA_LABEL = "Vajra Prajna Paramita Sutra"

_DIMS = {
    "keio": (640, 480),
    "harvard-yenching": (512, 768),
    "kyoto": (600, 400),
    "chester-beatty": (480, 640),
}

_COLORS = {
    "keio": (180, 40, 40),
    "harvard-yenching": (40, 90, 160),
    "kyoto": (40, 140, 60),
    "chester-beatty": (150, 120, 30),
}


def write_png(path, width, height, rgb):
    """Solid-color RGB PNG, no external imaging dependency."""

    def chunk(tag, payload):
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
        )

    header = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    row = b"\x00" + bytes(rgb) * width
    body = zlib.compress(row * height)
    data = b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", header) + chunk(b"IDAT", body) + chunk(b"IEND", b"")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return path


def image_identifier(institution, page):
    return f"{institution}-{page}"


def build_image_tree(root, base_url):
    """Pre-generate the level-0 derivative layout plus info.json per image."""
    root = Path(root)
    written = []
    for institution, _, pages in INSTITUTIONS:
        width, height = _DIMS[institution]
        for page in range(1, pages + 1):
            identifier = image_identifier(institution, page)
            image_dir = root / identifier
            write_png(image_dir / "full" / "max" / "0" / "default.png", width, height, _COLORS[institution])
            # one reduced derivative so non-canonical requests have something to hit
            write_png(image_dir / "full" / f"{width // 4}," / "0" / "default.png",
                      width // 4, height // 4, _COLORS[institution])
            info = {
                "@context": "http://iiif.io/api/image/3/context.json",
                "id": f"{base_url}/{identifier}",
                "type": "ImageService3",
                "protocol": "http://iiif.io/api/image",
                "profile": "level0",
                "width": width,
                "height": height,
            }
            (image_dir / "info.json").write_text(json.dumps(info, indent=2), encoding="utf-8")
            written.append(identifier)
    return written


def institution_manifest(base_url, institution, label, pages):
    width, height = _DIMS[institution]
    manifest_id = f"{base_url}/manifests/{institution}.json"
    items = []
    for page in range(1, pages + 1):
        identifier = image_identifier(institution, page)
        service_base = f"{base_url}/{identifier}"
        canvas_id = f"{base_url}/iiif/{institution}/canvas/{page}"
        items.append({
            "id": canvas_id,
            "type": "Canvas",
            "label": {"none": [f"Page {page}"]},
            "height": height,
            "width": width,
            "items": [{
                "id": f"{canvas_id}/page",
                "type": "AnnotationPage",
                "items": [{
                    "id": f"{canvas_id}/anno",
                    "type": "Annotation",
                    "motivation": "painting",
                    "body": {
                        "id": f"{service_base}/full/max/0/default.png",
                        "type": "Image",
                        "format": "image/png",
                        "height": height,
                        "width": width,
                        "service": [{"id": service_base, "type": "ImageService3", "profile": "level0"}],
                    },
                    "target": canvas_id,
                }],
            }],
        })
    return {
        "@context": "http://iiif.io/api/presentation/3/context.json",
        "id": manifest_id,
        "type": "Manifest",
        "label": {"en": [label]},
        "metadata": [
            {"label": {"en": ["Institution"]}, "value": {"en": [label]}},
            {"label": {"en": ["Pages"]}, "value": {"none": [str(pages)]}},
        ],
        "items": items,
    }


def manifest_v2_twin(base_url, institution, label, pages):
    """The same object in Presentation 2.x shape (sequences/canvases/images)."""
    width, height = _DIMS[institution]
    manifest_id = f"{base_url}/manifests/{institution}-v2.json"
    canvases = []
    for page in range(1, pages + 1):
        identifier = image_identifier(institution, page)
        service_base = f"{base_url}/{identifier}"
        canvas_id = f"{base_url}/iiif/{institution}/canvas/{page}"
        canvases.append({
            "@id": canvas_id,
            "@type": "sc:Canvas",
            "label": f"Page {page}",
            "height": height,
            "width": width,
            "images": [{
                "@id": f"{canvas_id}/anno",
                "@type": "oa:Annotation",
                "motivation": "sc:painting",
                "resource": {
                    "@id": f"{service_base}/full/max/0/default.png",
                    "@type": "dctypes:Image",
                    "format": "image/png",
                    "height": height,
                    "width": width,
                    "service": {
                        "@context": "http://iiif.io/api/image/2/context.json",
                        "@id": service_base,
                        "profile": "http://iiif.io/api/image/2/level0.json",
                    },
                },
                "on": canvas_id,
            }],
        })
    return {
        "@context": "http://iiif.io/api/presentation/2/context.json",
        "@id": manifest_id,
        "@type": "sc:Manifest",
        "label": label,
        "metadata": [
            {"label": "Institution", "value": label},
            {"label": "Pages", "value": str(pages)},
        ],
        "sequences": [{"@type": "sc:Sequence", "canvases": canvases}],
    }


def build_corpus(root, base_url):
    """Write images + manifests under root; returns {name: manifest URL}."""
    root = Path(root)
    build_image_tree(root, base_url)
    manifest_dir = root / "manifests"
    manifest_dir.mkdir(parents=True, exist_ok=True)
    urls = {}
    for institution, label, pages in INSTITUTIONS:
        if institution == "harvard-yenching":
            label = SUTRA_LABEL
        doc = institution_manifest(base_url, institution, label, pages)
        (manifest_dir / f"{institution}.json").write_text(json.dumps(doc, indent=2), encoding="utf-8")
        urls[institution] = f"{base_url}/manifests/{institution}.json"
    twin = manifest_v2_twin(base_url, "keio", "Keio Institute fixture scrolls", 2)
    (manifest_dir / "keio-v2.json").write_text(json.dumps(twin, indent=2), encoding="utf-8")
    urls["keio-v2"] = f"{base_url}/manifests/keio-v2.json"
    return urls


FIXTURE_ONTOLOGY_TTL = """\
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix arch: <https://vocab.fixture.example/archive#> .

arch:ArchivalObject a owl:Class ;
    rdfs:label "Archival object" ;
    rdfs:comment "Anything depicted in an archival image." .

arch:Seal a owl:Class ;
    rdfs:subClassOf arch:ArchivalObject ;
    rdfs:label "Seal" ;
    rdfs:comment "An impressed or stamped seal." .

arch:Character a owl:Class ;
    rdfs:subClassOf arch:ArchivalObject ;
    rdfs:label "Character" .

arch:Scroll a owl:Class ;
    rdfs:subClassOf arch:ArchivalObject ;
    rdfs:label "Scroll" .

arch:depicts a owl:ObjectProperty ;
    rdfs:label "depicts" ;
    rdfs:domain arch:Scroll ;
    rdfs:range arch:ArchivalObject .

arch:heldBy a owl:ObjectProperty ;
    rdfs:label "held by" ;
    rdfs:domain arch:ArchivalObject ;
    rdfs:range arch:ArchivalObject .

arch:inscription a owl:DatatypeProperty ;
    rdfs:label "inscription" ;
    rdfs:domain arch:Seal ;
    rdfs:range xsd:string .
"""

FIXTURE_ONTOLOGY_V2_EXTRA = """\
arch:Manuscript a owl:Class ;
    rdfs:subClassOf arch:ArchivalObject ;
    rdfs:label "Manuscript" .
"""

FIXTURE_ONTOLOGY_V3_EXTRA = """\
arch:Map a owl:Class ;
    rdfs:subClassOf arch:ArchivalObject ;
    rdfs:label "Map" .
"""


def ontology_version(n):
    """Versions 1..3 of the fixture vocabulary, each a superset of the last."""
    doc = FIXTURE_ONTOLOGY_TTL
    if n >= 2:
        doc += "\n" + FIXTURE_ONTOLOGY_V2_EXTRA
    if n >= 3:
        doc += "\n" + FIXTURE_ONTOLOGY_V3_EXTRA
    return doc
