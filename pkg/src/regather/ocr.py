"""Real-time text recognition over canvas regions via pluggable providers.

No pixels cross this module: each request hands the provider an Image API
URI for the region and stores what comes back as revision 0. Human
proofreading appends revisions; nothing is ever overwritten, and exports
always carry the latest text.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import requests

from .errors import (
    EmptyEditor,
    InvalidParameter,
    ProviderFailed,
    UnknownProvider,
    UnknownResource,
    UnknownResult,
)
from .annotations import RegionSelector
from .iiif.imageapi import ImageRequest, Region, build_image_uri
from .rdf.terms import Literal, nt_term
from .vocab import VOCAB

TEXT_REGION_CLASS = VOCAB + "TextRegion"
RECOGNIZED_TEXT = VOCAB + "recognizedText"


@dataclass
class OcrRevision:
    revision: int
    text: str
    created_at: str
    editor: str | None = None  # None marks machine output

    def as_dict(self):
        return {"revision": self.revision, "text": self.text, "created_at": self.created_at, "editor": self.editor}


@dataclass
class OcrResult:
    id: str
    canvas: str
    region: RegionSelector
    provider: str
    confidence: float
    image_uri: str
    annotation_id: str
    revisions: list = field(default_factory=list)

    @property
    def text(self):
        return self.revisions[-1].text

    @property
    def revision(self):
        return self.revisions[-1].revision

    @property
    def proofread_by(self):
        return self.revisions[-1].editor

    def as_dict(self):
        return {
            "id": self.id,
            "canvas": self.canvas,
            "region": self.region.as_dict(),
            "provider": self.provider,
            "confidence": self.confidence,
            "image_uri": self.image_uri,
            "annotation_id": self.annotation_id,
            "text": self.text,
            "revision": self.revision,
            "proofread_by": self.proofread_by,
            "revisions": [r.as_dict() for r in self.revisions],
        }


class StubOcrProvider:
    """Deterministic table lookup keyed by canvas id; the test provider."""

    def __init__(self, table=None):
        self.table = dict(table or {})

    def recognize(self, image_uri, language=None, canvas=None):
        entry = self.table.get(canvas)
        if entry is None:
            return "", 0.0, []
        if isinstance(entry, str):
            return entry, 1.0, []
        return entry.get("text", ""), float(entry.get("confidence", 1.0)), entry.get("boxes", [])


class HttpOcrProvider:
    """Generic adapter: POST {image_uri, language} to a recognition service.

    Credentials come from the environment only, never from config files.
    """

    def __init__(self, url, credential_env=None, timeout=30.0):
        self.url = url
        self.credential_env = credential_env
        self.timeout = timeout

    def recognize(self, image_uri, language=None, canvas=None):
        headers = {}
        if self.credential_env:
            token = os.environ.get(self.credential_env)
            if token:
                headers["Authorization"] = f"Bearer {token}"
        response = requests.post(
            self.url,
            json={"image_uri": image_uri, "language": language},
            headers=headers,
            timeout=self.timeout,
        )
        if response.status_code >= 400:
            raise ProviderFailed(f"provider returned HTTP {response.status_code}")
        payload = response.json()
        return payload.get("text", ""), float(payload.get("confidence", 0.0)), payload.get("boxes", [])


class OcrBridge:
    def __init__(self, platform):
        self._platform = platform
        self._providers = {}
        self._results = {}

    def configure_provider(self, provider_id, provider):
        self._providers[provider_id] = provider

    def providers(self):
        return sorted(self._providers)

    def get(self, result_id):
        result = self._results.get(result_id)
        if result is None:
            raise UnknownResult(f"no OCR result {result_id}")
        return result

    def results(self, canvas=None):
        out = list(self._results.values())
        if canvas is not None:
            out = [r for r in out if r.canvas == canvas]
        return out

    # --- operations ---

    def _region_to_image_region(self, region):
        if region.kind == "pct":
            return Region.pct(region.x, region.y, region.w, region.h)
        return Region.pixels(region.x, region.y, region.w, region.h)

    def recognize(self, canvas, region, provider_id, language=None):
        provider = self._providers.get(provider_id)
        if provider is None:
            raise UnknownProvider(f"provider {provider_id!r} is not configured")
        node = self._platform.registry.find_canvas(canvas)
        if node is None:
            raise UnknownResource(f"{canvas} is not a canvas of any registered resource")
        self._platform.annotations._check_bounds(node, region)
        if not node.image_services:
            raise InvalidParameter(f"{canvas} has no image service to recognize from")
        request = ImageRequest(
            service_base=node.image_services[0].service_base,
            region=self._region_to_image_region(region),
        )
        image_uri = build_image_uri(request)
        try:
            text, confidence, boxes = provider.recognize(image_uri, language=language, canvas=canvas)
        except ProviderFailed:
            raise
        except Exception as exc:
            raise ProviderFailed(f"provider {provider_id!r} failed: {exc}") from exc

        data = {
            "id": self._platform.mint_uri("ocr"),
            "canvas": canvas,
            "region": region.as_dict(),
            "provider": provider_id,
            "confidence": float(confidence),
            "image_uri": image_uri,
            "text": text,
            "annotation_id": self._platform.mint_uri("annotation"),
            "object_uri": self._platform.mint_uri("object"),
            "boxes": [
                {
                    "region": {"kind": region.kind, "x": b[0], "y": b[1], "w": b[2], "h": b[3]},
                    "text": b[4] if len(b) > 4 else "",
                    "annotation_id": self._platform.mint_uri("annotation"),
                    "object_uri": self._platform.mint_uri("object"),
                }
                for b in boxes
            ],
            "ts": self._platform.now(),
        }
        self._platform.commit("ocr.recognized", data)
        return self._results[data["id"]]

    def proofread(self, result_id, corrected, editor):
        result = self.get(result_id)
        if not editor or not str(editor).strip():
            raise EmptyEditor("proofreading requires an editor id")
        data = {
            "result_id": result_id,
            "revision": result.revision + 1,
            "text": corrected,
            "editor": editor,
            "ts": self._platform.now(),
        }
        self._platform.commit("ocr.proofread", data)
        return self.get(result_id)

    def export_corpus(self, provider=None, manifest=None):
        """Newline-delimited records pairing region URIs with latest text."""
        records = []
        for result in self._results.values():
            if provider is not None and result.provider != provider:
                continue
            if manifest is not None and self._platform.registry.canvas_owner(result.canvas) != manifest:
                continue
            records.append(result)
        records.sort(key=lambda r: (r.canvas, r.region.fragment()))
        lines = [
            json.dumps(
                {"image_uri": r.image_uri, "text": r.text, "revision": r.revision, "provider": r.provider},
                ensure_ascii=False,
            )
            for r in records
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    # --- event application ---

    def apply_recognized(self, data):
        region = RegionSelector.from_dict(data["region"])
        result = OcrResult(
            id=data["id"],
            canvas=data["canvas"],
            region=region,
            provider=data["provider"],
            confidence=data["confidence"],
            image_uri=data["image_uri"],
            annotation_id=data["annotation_id"],
            revisions=[OcrRevision(0, data["text"], data["ts"])],
        )
        self._results[result.id] = result
        self._platform.annotations.apply_created({
            "id": data["annotation_id"],
            "layer": "object",
            "target": data["canvas"],
            "region": data["region"],
            "body": [
                {"s": data["object_uri"], "p": "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
                 "o": f"<{TEXT_REGION_CLASS}>"},
                {"s": data["object_uri"], "p": RECOGNIZED_TEXT,
                 "o": nt_term(Literal(data["text"]))},
            ],
            "object_uri": data["object_uri"],
            "link_predicate": None,
            "link_target": None,
            "creator": "ocr:" + data["provider"],
            "created_at": data["ts"],
        })
        for box in data.get("boxes", []):
            self._platform.annotations.apply_created({
                "id": box["annotation_id"],
                "layer": "object",
                "target": data["canvas"],
                "region": box["region"],
                "body": [
                    {"s": box["object_uri"], "p": "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
                     "o": f"<{VOCAB}Word>"},
                    {"s": box["object_uri"], "p": RECOGNIZED_TEXT,
                     "o": nt_term(Literal(box.get("text", "")))},
                ],
                "object_uri": box["object_uri"],
                "link_predicate": None,
                "link_target": None,
                "creator": "ocr:" + data["provider"],
                "created_at": data["ts"],
            })

    def apply_proofread(self, data):
        result = self._results[data["result_id"]]
        result.revisions.append(OcrRevision(data["revision"], data["text"], data["ts"], editor=data["editor"]))

    # --- snapshot state ---

    def state_dict(self):
        return {
            "results": [
                {
                    "id": r.id,
                    "canvas": r.canvas,
                    "region": r.region.as_dict(),
                    "provider": r.provider,
                    "confidence": r.confidence,
                    "image_uri": r.image_uri,
                    "annotation_id": r.annotation_id,
                    "revisions": [rev.as_dict() for rev in r.revisions],
                }
                for r in self._results.values()
            ]
        }

    def load_state(self, state):
        for payload in state["results"]:
            self._results[payload["id"]] = OcrResult(
                id=payload["id"],
                canvas=payload["canvas"],
                region=RegionSelector.from_dict(payload["region"]),
                provider=payload["provider"],
                confidence=payload["confidence"],
                image_uri=payload["image_uri"],
                annotation_id=payload["annotation_id"],
                revisions=[
                    OcrRevision(rev["revision"], rev["text"], rev["created_at"], editor=rev.get("editor"))
                    for rev in payload["revisions"]
                ],
            )
