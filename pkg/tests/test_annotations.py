import random

import pytest

from regather.annotations import RegionSelector
from regather.errors import (
    EmptyBody,
    NotAbsoluteUri,
    RegionOutOfBounds,
    UnknownResource,
    UnknownSubject,
)
from regather.rdf.terms import OWL_SAMEAS, RDFS_LABEL
from regather.vocab import ANNOTATION_GRAPH, LINKING_GRAPH

SEAL_CLASS = "https://vocab.fixture.example/archive#Seal"
SEAL_URI = "https://objects.fixture.example/seal/tibetan-1"


@pytest.fixture
def imported(platform, fixture_corpus):
    records = [platform.import_manifest(fixture_corpus["manifests"][n]) for n in ("keio", "harvard-yenching")]
    return records


def canvases(record):
    return record.resource.canvases()


# --- image layer ---

def test_image_layer_writes_one_quad_per_pair(imported, platform):
    target = imported[1].local_uri
    annotation = platform.annotations.annotate_image_layer(
        target, [("http://purl.org/dc/terms/title", "Vajra Prajna Paramita Sutra")], creator="curator"
    )
    assert annotation.layer == "image"
    result = platform.query(
        f"SELECT ?o WHERE {{ GRAPH <{ANNOTATION_GRAPH}> {{ <{target}> <http://purl.org/dc/terms/title> ?o }} }}"
    )
    assert [row[0].lexical for row in result.rows] == ["Vajra Prajna Paramita Sutra"]


def test_image_layer_empty_body(imported, platform):
    with pytest.raises(EmptyBody):
        platform.annotations.annotate_image_layer(imported[0].local_uri, [])


def test_image_layer_five_pairs_queryable(imported, platform):
    target = imported[0].local_uri
    pairs = [(f"urn:meta:p{i}", f"value {i}") for i in range(5)]
    platform.annotations.annotate_image_layer(target, pairs)
    result = platform.query(f"SELECT ?p ?o WHERE {{ GRAPH <{ANNOTATION_GRAPH}> {{ <{target}> ?p ?o }} }}")
    assert len(result.rows) == 5


def test_image_layer_unknown_target(platform):
    with pytest.raises(UnknownResource):
        platform.annotations.annotate_image_layer("https://nowhere.example/m", [("urn:p", "v")])


# --- object layer ---

def test_shared_object_uri_across_institutions(imported, platform):
    canvas_a = canvases(imported[0])[0]
    canvas_b = canvases(imported[1])[0]
    for canvas in (canvas_a, canvas_b):
        platform.annotations.annotate_object_layer(
            canvas.id, RegionSelector("pixel", 5, 5, 40, 40), SEAL_CLASS,
            object_uri=SEAL_URI, body=[(RDFS_LABEL, "Tibetan seal")],
        )
    occurrences = platform.annotations.find_object_occurrences(SEAL_URI)
    assert [c for c, _ in occurrences] == [canvas_a.id, canvas_b.id]


def test_region_bounds(imported, platform):
    canvas = canvases(imported[0])[0]  # 640x480
    platform.annotations.annotate_object_layer(
        canvas.id, RegionSelector("pixel", 0, 0, 10, 10), SEAL_CLASS)
    with pytest.raises(RegionOutOfBounds):
        platform.annotations.annotate_object_layer(
            canvas.id, RegionSelector("pixel", 635, 475, 10, 10), SEAL_CLASS)


def test_pct_region_bounds(imported, platform):
    canvas = canvases(imported[0])[0]
    platform.annotations.annotate_object_layer(canvas.id, RegionSelector("pct", 90, 90, 10, 10), SEAL_CLASS)
    with pytest.raises(RegionOutOfBounds):
        platform.annotations.annotate_object_layer(canvas.id, RegionSelector("pct", 95, 95, 10, 10), SEAL_CLASS)


def test_region_stored_exactly(imported, platform):
    canvas = canvases(imported[0])[0]
    region = RegionSelector("pixel", 1, 2, 3, 4)
    annotation = platform.annotations.annotate_object_layer(canvas.id, region, SEAL_CLASS)
    assert annotation.region == region
    region_pct = RegionSelector("pct", 1.25, 2.5, 3.75, 4.125)
    annotation = platform.annotations.annotate_object_layer(canvas.id, region_pct, SEAL_CLASS)
    assert annotation.region == region_pct  # no rounding


def test_object_uri_minted_when_absent(imported, platform):
    canvas = canvases(imported[0])[0]
    annotation = platform.annotations.annotate_object_layer(canvas.id, RegionSelector("pixel", 0, 0, 5, 5), SEAL_CLASS)
    assert annotation.object_uri.startswith(platform.config.platform_base + "/object/")


def test_recognizer_stub_equivalent_to_manual(imported, platform):
    """Recognizer output fed through the op matches a manual annotation."""
    canvas = canvases(imported[0])[0]
    recognizer_table = {canvas.id: [(RegionSelector("pixel", 10, 10, 64, 64), SEAL_CLASS, 0.97)]}
    region, object_class, _confidence = recognizer_table[canvas.id][0]
    from_recognizer = platform.annotations.annotate_object_layer(
        canvas.id, region, object_class, object_uri=SEAL_URI)
    manual = platform.annotations.annotate_object_layer(
        canvas.id, RegionSelector("pixel", 10, 10, 64, 64), SEAL_CLASS, object_uri=SEAL_URI)
    assert from_recognizer.region == manual.region
    assert from_recognizer.object_uri == manual.object_uri
    assert [q.triple() for q in from_recognizer.body] == [q.triple() for q in manual.body]


# --- semantic layer ---

def _seal(platform, imported):
    canvas = canvases(imported[0])[0]
    return platform.annotations.annotate_object_layer(
        canvas.id, RegionSelector("pixel", 5, 5, 40, 40), SEAL_CLASS, object_uri=SEAL_URI)


def test_semantic_layer_mirrors_to_linking_graph(imported, platform):
    _seal(platform, imported)
    before = platform.store.count(LINKING_GRAPH)
    platform.annotations.annotate_semantic_layer(SEAL_URI, OWL_SAMEAS, "https://ext.example/author/42")
    assert platform.store.count(LINKING_GRAPH) == before + 1
    result = platform.query(
        f"SELECT ?o WHERE {{ GRAPH <{LINKING_GRAPH}> {{ <{SEAL_URI}> <{OWL_SAMEAS}> ?o }} }}")
    assert result.rows[0][0].value == "https://ext.example/author/42"


def test_semantic_duplicate_is_idempotent(imported, platform):
    _seal(platform, imported)
    first = platform.annotations.annotate_semantic_layer(SEAL_URI, OWL_SAMEAS, "https://ext.example/a")
    count = platform.store.count(LINKING_GRAPH)
    second = platform.annotations.annotate_semantic_layer(SEAL_URI, OWL_SAMEAS, "https://ext.example/a")
    assert first.id == second.id
    assert platform.store.count(LINKING_GRAPH) == count


def test_semantic_relative_target_rejected(imported, platform):
    _seal(platform, imported)
    with pytest.raises(NotAbsoluteUri):
        platform.annotations.annotate_semantic_layer(SEAL_URI, OWL_SAMEAS, "authors/42")


def test_semantic_unknown_subject(platform):
    with pytest.raises(UnknownSubject):
        platform.annotations.annotate_semantic_layer("urn:ghost", OWL_SAMEAS, "https://ext.example/a")


# --- cross-cutting ---

def test_occurrences_unknown_object_empty(platform):
    assert platform.annotations.find_object_occurrences("urn:never") == []


def test_occurrences_survive_composition(imported, platform):
    canvas = canvases(imported[0])[0]
    platform.annotations.annotate_object_layer(
        canvas.id, RegionSelector("pixel", 5, 5, 20, 20), SEAL_CLASS, object_uri=SEAL_URI)
    platform.compose_manifest("Composite", [canvas.id])
    occurrences = platform.annotations.find_object_occurrences(SEAL_URI)
    assert [c for c, _ in occurrences] == [canvas.id]  # anchored to the source canvas


def test_graph_mirroring_count_invariant(imported, platform):
    _seal(platform, imported)
    for i in range(4):
        platform.annotations.annotate_semantic_layer(SEAL_URI, OWL_SAMEAS, f"https://ext.example/{i}")
    semantic = [a for a in platform.annotations.all() if a.layer == "semantic"]
    links = {(q.subject, q.object) for q in platform.store.quads(LINKING_GRAPH)
             if q.predicate.value == OWL_SAMEAS}
    assert len(semantic) == len(links)


def _layer_fields_ok(annotation):
    image = annotation.region is None and annotation.object_uri is None and annotation.link_predicate is None
    obj = annotation.region is not None and annotation.object_uri is not None and annotation.link_predicate is None
    semantic = annotation.link_predicate is not None and annotation.link_target is not None and annotation.region is None
    return {"image": image, "object": obj, "semantic": semantic}[annotation.layer] and \
        sum((image, obj, semantic)) == 1


def test_layer_partition_fuzz(imported, platform):
    """Every stored annotation satisfies exactly one layer's field shape."""
    rng = random.Random(7)
    canvas_ids = [c.id for r in imported for c in canvases(r)]
    objects = []
    for i in range(300):
        roll = rng.random()
        if roll < 0.4:
            platform.annotations.annotate_image_layer(
                rng.choice([r.local_uri for r in imported]),
                [(f"urn:meta:p{rng.randint(0, 3)}", f"v{i}")])
        elif roll < 0.8 or not objects:
            annotation = platform.annotations.annotate_object_layer(
                rng.choice(canvas_ids),
                RegionSelector("pixel", rng.randint(0, 50), rng.randint(0, 50), rng.randint(1, 200), rng.randint(1, 200)),
                SEAL_CLASS)
            objects.append(annotation.object_uri)
        else:
            platform.annotations.annotate_semantic_layer(
                rng.choice(objects), OWL_SAMEAS, f"https://ext.example/fuzz/{rng.randint(0, 60)}")
    stored = platform.annotations.all()
    assert len(stored) >= 300 * 0.9  # semantic duplicates collapse
    assert all(_layer_fields_ok(a) for a in stored)


def test_web_annotation_export_shape(imported, platform):
    annotation = _seal(platform, imported)
    doc = annotation.as_web_annotation()
    assert doc["@context"] == "http://www.w3.org/ns/anno.jsonld"
    assert doc["type"] == "Annotation"
    assert doc["target"]["selector"]["value"] == "xywh=5,5,40,40"
    assert doc["regather:layer"] == "object"
    assert any("n-triples" in b["format"] for b in doc["body"])


def test_web_annotation_import_round_trip(imported, platform):
    original = _seal(platform, imported)
    doc = original.as_web_annotation()
    doc.pop("id")
    (restored,) = platform.annotations.import_web_annotation(doc, creator="importer")
    assert restored.layer == "object"
    assert restored.target == original.target
    assert restored.region == original.region
    assert restored.object_uri == original.object_uri
    assert {q.triple() for q in restored.body} == {q.triple() for q in original.body}


def test_web_annotation_page_batch_import(imported, platform):
    canvas = canvases(imported[0])[0]
    page = {
        "type": "AnnotationPage",
        "items": [
            {
                "type": "Annotation",
                "motivation": "identifying",
                "target": {"source": canvas.id,
                           "selector": {"type": "FragmentSelector", "value": f"xywh=1,1,{10 + i},{10 + i}"}},
                "body": [],
                "regather:objectClass": SEAL_CLASS,
            }
            for i in range(3)
        ],
    }
    created = platform.annotations.import_web_annotation(page)
    assert len(created) == 3
    assert all(a.layer == "object" for a in created)


def test_web_annotation_import_rejects_unshaped_document(platform):
    import pytest as _pytest
    from regather.errors import InvalidParameter

    with _pytest.raises(InvalidParameter):
        platform.annotations.import_web_annotation({"type": "Bookmark"})
