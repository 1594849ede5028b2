#!/usr/bin/env python3
"""Generate the desk-scale fixture corpus: level-0 image derivative trees,
info.json documents, and the four institutional manifests (plus a 2.x twin).

Asserts that every info.json width/height matches the paired manifest
canvas before declaring the corpus good.

Usage:
    python scripts/build_fixtures.py OUTPUT_DIR [--base http://127.0.0.1:8801]
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from regather.fixture_data import build_corpus
from regather.iiif.parse import parse_presentation


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="directory to write the corpus into")
    parser.add_argument("--base", default="http://127.0.0.1:8801",
                        help="base URL the fixture server will be reachable at")
    args = parser.parse_args()

    root = Path(args.output)
    urls = build_corpus(root, args.base)

    checked = 0
    for name, url in urls.items():
        manifest_path = root / "manifests" / url.rsplit("/", 1)[1]
        tree = parse_presentation(manifest_path.read_bytes())
        for canvas in tree.canvases():
            service = canvas.image_services[0].service_base
            identifier = service[len(args.base) + 1:]
            info = json.loads((root / identifier / "info.json").read_text(encoding="utf-8"))
            assert (info["height"], info["width"]) == (canvas.height, canvas.width), (
                f"{identifier}: info.json {info['width']}x{info['height']} "
                f"!= canvas {canvas.width}x{canvas.height}")
            checked += 1

    print(f"wrote corpus to {root} ({len(urls)} manifests, {checked} canvases checked)")
    print(f"serve it with: regather fixtures serve --root {root} --port {args.base.rsplit(':', 1)[1]}")


if __name__ == "__main__":
    main()
