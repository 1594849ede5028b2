"""Shared fixtures: throwaway platforms, a live level-0 image server
serving the four-institution corpus, and canned SPARQL fixture endpoints."""

from __future__ import annotations

import socket
import threading
import time

import pytest
import uvicorn
from starlette.applications import Starlette
from starlette.responses import JSONResponse
from starlette.routing import Route

from regather.config import PlatformConfig
from regather.fixture_data import build_corpus, image_identifier, INSTITUTIONS
from regather.platform import Platform
from regather.rdf.store import QuadStore
from regather.service.app import _solution_json
from regather.service.fixtures import build_fixture_app

SUTRA_TEXT = "金剛般若波羅蜜經"  # fixture OCR stub output


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class LiveServer:
    """uvicorn in a daemon thread, bound to a pre-chosen port."""

    def __init__(self, app, port=None):
        self.port = port or free_port()
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=self.port, log_level="error", lifespan="off")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    @property
    def base_url(self):
        return f"http://127.0.0.1:{self.port}"

    def start(self):
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        return self

    def stop(self):
        self._server.should_exit = True
        self._thread.join(timeout=5)


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory):
    """Level-0 image tree + manifests, served over loopback for the session."""
    root = tmp_path_factory.mktemp("corpus")
    port = free_port()
    base_url = f"http://127.0.0.1:{port}"
    manifest_urls = build_corpus(root, base_url)
    server = LiveServer(build_fixture_app(root), port=port).start()
    yield {
        "root": root,
        "base_url": base_url,
        "manifests": manifest_urls,
        "canvas": lambda inst, page: f"{base_url}/iiif/{inst}/canvas/{page}",
        "service": lambda inst, page: f"{base_url}/{image_identifier(inst, page)}",
        "institutions": [name for name, _, _ in INSTITUTIONS],
    }
    server.stop()


@pytest.fixture
def platform(tmp_path, fixture_corpus):
    stub_table = {
        fixture_corpus["canvas"]("harvard-yenching", 1): SUTRA_TEXT,
        fixture_corpus["canvas"]("keio", 1): "fixture text keio",
    }
    config = PlatformConfig(
        storage_root=str(tmp_path / "data"),
        snapshot_every=0,
        providers={"stub": {"table": stub_table}},
    )
    p = Platform(config)
    yield p
    p.close()


@pytest.fixture
def four_imported(platform, fixture_corpus):
    """All four institutional manifests imported; returns their records."""
    records = [
        platform.import_manifest(fixture_corpus["manifests"][name])
        for name in fixture_corpus["institutions"]
    ]
    return records


def sparql_endpoint_app(quads_by_graph, delay=0.0):
    """A canned SPARQL endpoint: a real store behind the query protocol."""
    store = QuadStore(list(quads_by_graph))
    for graph, quads in quads_by_graph.items():
        store.assert_quads(quads)

    async def sparql(request):
        if delay:
            import anyio

            await anyio.sleep(delay)
        query = request.query_params.get("query", "")
        solution = store.query(query)
        return JSONResponse(_solution_json(solution), media_type="application/sparql-results+json")

    return Starlette(routes=[Route("/sparql", sparql, methods=["GET", "POST"])])
