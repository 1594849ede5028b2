"""Level-0 semantics of the static image fixture service."""

import json

import requests

from regather.iiif.parse import parse_presentation


def test_canonical_full_max_served(fixture_corpus):
    base = fixture_corpus["service"]("keio", 1)
    response = requests.get(base + "/full/max/0/default.png", timeout=5)
    assert response.status_code == 200
    assert response.content.startswith(b"\x89PNG")
    assert response.headers["content-type"] == "image/png"


def test_unlisted_size_is_not_found(fixture_corpus):
    base = fixture_corpus["service"]("keio", 1)
    response = requests.get(base + "/full/123,/0/default.png", timeout=5)
    assert response.status_code == 404
    assert response.json()["error"] == "not_found"


def test_rotation_requests_not_pregenerated(fixture_corpus):
    base = fixture_corpus["service"]("keio", 1)
    assert requests.get(base + "/full/max/90/default.png", timeout=5).status_code == 404


def test_info_json_matches_manifest_canvas_dimensions(fixture_corpus):
    for name in fixture_corpus["institutions"]:
        manifest = parse_presentation(
            requests.get(fixture_corpus["manifests"][name], timeout=5).content)
        for canvas in manifest.canvases():
            service = canvas.image_services[0].service_base
            info = requests.get(service + "/info.json", timeout=5).json()
            assert (info["height"], info["width"]) == (canvas.height, canvas.width)


def test_path_traversal_refused(fixture_corpus):
    response = requests.get(
        fixture_corpus["base_url"] + "/manifests/..%2F..%2Fetc%2Fpasswd", timeout=5)
    assert response.status_code == 404


def test_manifest_documents_served_as_json_ld(fixture_corpus):
    response = requests.get(fixture_corpus["manifests"]["keio"], timeout=5)
    assert response.headers["content-type"].startswith("application/ld+json")
    json.loads(response.content)
