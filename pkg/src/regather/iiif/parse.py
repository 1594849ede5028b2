"""Presentation document parsing.

Accepts both 2.x and 3.0 shapes and normalizes everything to the internal
3.0-style tree. Unknown properties land in the extensions bag verbatim so
serialization is lossless; 2.x structural keys (sequences, images, @id,
@type) are consumed by normalization.
"""

from __future__ import annotations

import json

from ..errors import MalformedDocument, NestingViolation, NotPresentation
from .model import ALLOWED_CHILDREN, ImageServiceRef, KINDS, PresentationResource

_V3_CONSUMED = {"id", "type", "label", "metadata", "items", "requiredStatement", "rights", "height", "width"}
_AV_BODY_TYPES = {"Video", "Sound", "Audio"}

_V2_TYPE_MAP = {
    "sc:Manifest": "Manifest",
    "sc:Collection": "Collection",
    "sc:Canvas": "Canvas",
    "sc:AnnotationList": "AnnotationPage",
    "oa:Annotation": "Annotation",
}


def _load_json(document):
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"document is not UTF-8: {exc}") from exc
    if isinstance(document, str):
        try:
            return json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"document is not JSON: {exc.msg}", line=exc.lineno) from exc
    return document


def _language_map(value, path):
    """Normalize label-ish values to {language: [strings]}; bare strings get 'none'."""
    if value is None:
        return {}
    if isinstance(value, str):
        return {"none": [value]}
    if isinstance(value, dict):
        if "@value" in value:
            lang = value.get("@language") or "none"
            return {lang: [value["@value"]]}
        out = {}
        for lang, entries in value.items():
            if isinstance(entries, str):
                entries = [entries]
            if not isinstance(entries, list):
                raise NotPresentation(f"malformed language map at {path}")
            out[lang] = [str(entry) for entry in entries]
        return out
    if isinstance(value, list):
        merged = {}
        for entry in value:
            for lang, strings in _language_map(entry, path).items():
                merged.setdefault(lang, []).extend(strings)
        return merged
    return {"none": [str(value)]}


def _metadata_pairs(entries, path):
    pairs = []
    for entry in entries or []:
        if not isinstance(entry, dict):
            raise NotPresentation(f"malformed metadata entry at {path}")
        pairs.append((_language_map(entry.get("label"), path), _language_map(entry.get("value"), path)))
    return pairs


def _services_of_body(body):
    services = []
    bodies = body if isinstance(body, list) else [body]
    for entry in bodies:
        if not isinstance(entry, dict):
            continue
        raw = entry.get("service")
        if raw is None:
            continue
        for svc in raw if isinstance(raw, list) else [raw]:
            if not isinstance(svc, dict):
                continue
            base = svc.get("id") or svc.get("@id")
            if not base:
                continue
            profile = svc.get("profile", "")
            if isinstance(profile, list):
                profile = next((p for p in profile if isinstance(p, str)), "")
            services.append(ImageServiceRef(service_base=base, profile=str(profile)))
    return services


def _extract_image_services(canvas):
    services = []
    for page in canvas.items:
        for annotation in page.items:
            motivation = annotation.extensions.get("motivation")
            body = annotation.extensions.get("body")
            if body is None:
                continue
            if motivation in (None, "painting", "sc:painting"):
                services.extend(_services_of_body(body))
    return services


def _check_painting_body(extensions, path):
    body = extensions.get("body")
    if body is None:
        return
    bodies = body if isinstance(body, list) else [body]
    for entry in bodies:
        if isinstance(entry, dict) and entry.get("type") in _AV_BODY_TYPES:
            raise NestingViolation(
                f"audio/video content is not supported: body type {entry.get('type')!r} at {path}"
            )


def _parse_v3_node(data, parent_kind, path, is_root):
    if not isinstance(data, dict):
        raise NotPresentation(f"resource at {path} is not a JSON object")
    rid = data.get("id") or data.get("@id")
    kind = data.get("type") or data.get("@type")
    if not rid or not isinstance(rid, str):
        raise NotPresentation(f"resource at {path} has no id")
    if not kind or not isinstance(kind, str):
        raise NotPresentation(f"resource at {path} has no type")
    if kind not in KINDS:
        if is_root:
            raise NotPresentation(f"unknown resource type {kind!r} at {path}")
        raise NestingViolation(f"unknown resource type {kind!r} at {path}")
    if parent_kind is not None and kind not in ALLOWED_CHILDREN[parent_kind]:
        raise NestingViolation(f"{kind} cannot be nested inside {parent_kind} at {path}")

    consumed = set(_V3_CONSUMED)
    if is_root:
        consumed.add("@context")
    extensions = {key: value for key, value in data.items() if key not in consumed}
    if kind == "Annotation":
        _check_painting_body(extensions, path)

    required = None
    if isinstance(data.get("requiredStatement"), dict):
        rs = data["requiredStatement"]
        required = (_language_map(rs.get("label"), path), _language_map(rs.get("value"), path))

    node = PresentationResource(
        id=rid,
        kind=kind,
        label=_language_map(data.get("label"), path),
        metadata=_metadata_pairs(data.get("metadata"), path),
        height=data.get("height"),
        width=data.get("width"),
        required_statement=required,
        rights=data.get("rights"),
        extensions=extensions,
    )
    for index, child in enumerate(data.get("items") or []):
        node.items.append(_parse_v3_node(child, kind, f"{path}.items[{index}]", False))
    if kind == "Canvas":
        node.image_services = _extract_image_services(node)
    return node


# --- 2.x normalization ---

def _v2_kind(data, path):
    raw = data.get("@type")
    if isinstance(raw, list):
        raw = next((t for t in raw if t in _V2_TYPE_MAP), raw[0] if raw else None)
    if raw in _V2_TYPE_MAP:
        return _V2_TYPE_MAP[raw]
    raise NotPresentation(f"unknown 2.x type {raw!r} at {path}")


def _v2_image_to_annotation(image, canvas_id, index, path):
    resource = image.get("resource") or {}
    body = {}
    if resource.get("@id"):
        body["id"] = resource["@id"]
    body["type"] = "Image"
    if resource.get("format"):
        body["format"] = resource["format"]
    for dim in ("height", "width"):
        if isinstance(resource.get(dim), int):
            body[dim] = resource[dim]
    raw_services = resource.get("service")
    services = []
    for svc in raw_services if isinstance(raw_services, list) else [raw_services] if raw_services else []:
        if not isinstance(svc, dict) or not svc.get("@id"):
            continue
        profile = svc.get("profile", "")
        if isinstance(profile, list):
            profile = next((p for p in profile if isinstance(p, str)), "")
        services.append({"id": svc["@id"], "type": "ImageService2", "profile": profile})
    if services:
        body["service"] = services
    if resource.get("@type") in ("dctypes:MovingImage", "dctypes:Sound"):
        raise NestingViolation(f"audio/video content is not supported at {path}")

    annotation = PresentationResource(
        id=image.get("@id") or f"{canvas_id}/annotation/{index + 1}",
        kind="Annotation",
        extensions={"motivation": "painting", "body": body, "target": image.get("on", canvas_id)},
    )
    return annotation


def _parse_v2_node(data, parent_kind, path):
    if not isinstance(data, dict):
        raise NotPresentation(f"resource at {path} is not a JSON object")
    rid = data.get("@id")
    if not rid or not isinstance(rid, str):
        raise NotPresentation(f"resource at {path} has no @id")
    kind = _v2_kind(data, path)
    if parent_kind is not None and kind not in ALLOWED_CHILDREN[parent_kind]:
        raise NestingViolation(f"{kind} cannot be nested inside {parent_kind} at {path}")

    consumed = {
        "@id", "@type", "@context", "label", "metadata", "sequences", "canvases",
        "images", "attribution", "license", "height", "width", "collections",
        "manifests", "members", "on", "resource", "motivation",
    }
    extensions = {key: value for key, value in data.items() if key not in consumed}

    required = None
    if data.get("attribution"):
        required = ({"none": ["Attribution"]}, _language_map(data["attribution"], path))

    node = PresentationResource(
        id=rid,
        kind=kind,
        label=_language_map(data.get("label"), path),
        metadata=_metadata_pairs(data.get("metadata"), path),
        height=data.get("height"),
        width=data.get("width"),
        required_statement=required,
        rights=data.get("license") if isinstance(data.get("license"), str) else None,
        extensions=extensions,
    )

    if kind == "Manifest":
        sequences = data.get("sequences") or []
        canvases = sequences[0].get("canvases", []) if sequences else []
        for index, canvas in enumerate(canvases):
            node.items.append(_parse_v2_node(canvas, "Manifest", f"{path}.sequences[0].canvases[{index}]"))
    elif kind == "Collection":
        members = data.get("members")
        if members is None:
            members = (data.get("collections") or []) + (data.get("manifests") or [])
        for index, member in enumerate(members):
            node.items.append(_parse_v2_node(member, "Collection", f"{path}.members[{index}]"))
    elif kind == "Canvas":
        images = data.get("images") or []
        if images:
            page = PresentationResource(id=f"{rid}/annopage", kind="AnnotationPage")
            for index, image in enumerate(images):
                page.items.append(_v2_image_to_annotation(image, rid, index, f"{path}.images[{index}]"))
            node.items.append(page)
        node.image_services = _extract_image_services(node)
    return node


def _is_v2(data):
    context = data.get("@context", "")
    contexts = context if isinstance(context, list) else [context]
    if any(isinstance(c, str) and "/presentation/2" in c for c in contexts):
        return True
    if "@type" in data and "type" not in data:
        return True
    return "sequences" in data and "items" not in data


def parse_presentation(document):
    """Parse Presentation JSON (2.x or 3.0) into the typed internal tree."""
    data = _load_json(document)
    if not isinstance(data, dict):
        raise NotPresentation("document is not a JSON object")
    if _is_v2(data):
        return _parse_v2_node(data, None, "$")
    return _parse_v3_node(data, None, "$", True)
