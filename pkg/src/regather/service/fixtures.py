"""Level-0 static image service for desk-scale tests.

Serves only pre-generated derivative files laid out as
{id}/{region}/{size}/{rotation}/{quality}.{format} plus one info.json per
image; any request outside that tree is a plain 404. Manifest JSON under
manifests/ rides along so imports have something to fetch.
"""

from __future__ import annotations

import json
from pathlib import Path

from starlette.applications import Starlette
from starlette.responses import FileResponse, JSONResponse, Response
from starlette.routing import Route

_MEDIA = {
    ".jpg": "image/jpeg",
    ".png": "image/png",
    ".tif": "image/tiff",
    ".gif": "image/gif",
    ".webp": "image/webp",
    ".json": "application/json",
}


def build_fixture_app(root):
    root = Path(root).resolve()

    def _not_found(path):
        return JSONResponse(
            {"error": "not_found", "message": "level-0 service: only pre-generated derivatives exist",
             "path": path},
            status_code=404,
        )

    async def info(request):
        identifier = request.path_params["identifier"]
        path = root / identifier / "info.json"
        if not path.is_file():
            return _not_found(request.url.path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        doc["id"] = str(request.base_url).rstrip("/") + "/" + identifier
        doc.setdefault("@context", "http://iiif.io/api/image/3/context.json")
        return JSONResponse(doc, media_type='application/ld+json;profile="http://iiif.io/api/image/3/context.json"')

    async def tile(request):
        p = request.path_params
        relative = Path(p["identifier"]) / p["region"] / p["size"] / p["rotation"] / p["quality_format"]
        path = (root / relative).resolve()
        if root not in path.parents or not path.is_file():
            return _not_found(request.url.path)
        return FileResponse(path, media_type=_MEDIA.get(path.suffix, "application/octet-stream"))

    async def manifest(request):
        path = (root / "manifests" / request.path_params["name"]).resolve()
        if root not in path.parents or not path.is_file():
            return _not_found(request.url.path)
        return Response(path.read_bytes(), media_type="application/ld+json")

    async def healthz(request):
        return JSONResponse({"status": "ok", "root": str(root)})

    return Starlette(routes=[
        Route("/healthz", healthz, methods=["GET"]),
        Route("/manifests/{name}", manifest, methods=["GET", "HEAD"]),
        Route("/{identifier}/info.json", info, methods=["GET", "HEAD"]),
        Route("/{identifier}/{region}/{size}/{rotation}/{quality_format}", tile, methods=["GET", "HEAD"]),
    ])


def serve_fixture_images(root, host="127.0.0.1", port=8801):
    import uvicorn

    uvicorn.run(build_fixture_app(root), host=host, port=port, log_level="warning")
