#!/usr/bin/env python3
"""End-to-end walkthrough of the four-institution scenario, entirely on
loopback: build fixtures, serve them level-0, import all four manifests
by URI, recompose a cross-institution collection and manifest, annotate a
shared seal across two institutions, run OCR with the stub provider, and
query the result graphs.

Usage:
    python scripts/demo_four_sources.py [--keep DIR]
"""

import argparse
import json
import shutil
import socket
import sys
import tempfile
import threading
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import uvicorn

from regather.annotations import RegionSelector
from regather.config import PlatformConfig
from regather.fixture_data import build_corpus
from regather.platform import Platform
from regather.rdf.terms import OWL_SAMEAS, RDFS_LABEL
from regather.service.fixtures import build_fixture_app
from regather.vocab import LINKING_GRAPH

SEAL = "https://objects.fixture.example/seal/demo"
SEAL_CLASS = "https://vocab.fixture.example/archive#Seal"


def start_fixture_server(root, port):
    server = uvicorn.Server(uvicorn.Config(
        build_fixture_app(root), host="127.0.0.1", port=port, log_level="error", lifespan="off"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.01)
    return server


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--keep", default=None, help="keep working data in this directory")
    args = parser.parse_args()

    workdir = Path(args.keep) if args.keep else Path(tempfile.mkdtemp(prefix="regather-demo-"))
    corpusdir = workdir / "corpus"
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    base_url = f"http://127.0.0.1:{port}"

    urls = build_corpus(corpusdir, base_url)
    server = start_fixture_server(corpusdir, port)
    print(f"[1] fixture image server: {base_url} (level-0, {len(urls)} manifests)")

    platform = Platform(PlatformConfig(storage_root=str(workdir / "data"), snapshot_every=0))
    records = platform.import_many([urls[n] for n in ("keio", "harvard-yenching", "kyoto", "chester-beatty")])
    print(f"[2] imported {len(records)} manifests (no pixels copied):")
    for record in records:
        print(f"      {record.local_uri}  <-  {record.source_uri}")

    collection = platform.compose_collection("Collection of classic archives", [r.local_uri for r in records])
    print(f"[3] collection of four sources: {collection.local_uri}")

    members = [r.resource.canvases()[0].id for r in records]
    composed = platform.compose_manifest("Cross-institution composite", members)
    services = [c.image_services[0].service_base for c in composed.resource.canvases()]
    print(f"[4] composite manifest with {len(services)} canvases; inherited image bases:")
    for service in services:
        print(f"      {service}")

    chain = platform.trace_gene_chain(composed.resource.canvases()[0].id)
    print("[5] gene chain of the first composed canvas:")
    for link in chain:
        print(f"      {link.link_kind}: {link.source}")

    for record in records[:2]:
        platform.annotations.annotate_object_layer(
            record.resource.canvases()[0].id, RegionSelector("pixel", 10, 10, 60, 60),
            SEAL_CLASS, object_uri=SEAL, body=[(RDFS_LABEL, "Demo seal")])
    platform.annotations.annotate_semantic_layer(SEAL, OWL_SAMEAS, "https://ext.example/entity/demo-seal")
    occurrences = platform.annotations.find_object_occurrences(SEAL)
    print(f"[6] one seal annotated on {len(occurrences)} canvases from different institutions")

    links = platform.query(
        f"SELECT ?ext WHERE {{ GRAPH <{LINKING_GRAPH}> {{ <{SEAL}> <{OWL_SAMEAS}> ?ext }} }}")
    print(f"[7] linking graph knows {len(links.rows)} external URI(s) for the seal")

    stub_table = {records[1].resource.canvases()[0].id: "金剛般若波羅蜜經"}
    from regather.ocr import StubOcrProvider

    platform.ocr.configure_provider("stub", StubOcrProvider(stub_table))
    ocr = platform.ocr.recognize(records[1].resource.canvases()[0].id, RegionSelector("pixel", 0, 0, 200, 80), "stub")
    platform.ocr.proofread(ocr.id, ocr.text + "序", "demo-editor")
    print(f"[8] OCR + proofread: {json.dumps(platform.ocr.export_corpus().strip().split(chr(10))[-1], ensure_ascii=False)}")

    dump = platform.dump(LINKING_GRAPH, "ttl").decode()
    print("[9] linking graph as Turtle:")
    for line in dump.strip().splitlines():
        print(f"      {line}")

    server.should_exit = True
    platform.close()
    if not args.keep:
        shutil.rmtree(workdir, ignore_errors=True)
    else:
        print(f"data kept under {workdir}")
    print("demo complete")


if __name__ == "__main__":
    main()
