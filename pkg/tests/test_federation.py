import pytest

from regather.annotations import RegionSelector
from regather.errors import DuplicateName, InvalidUrl, UnknownObject
from regather.federation import EndpointConfig
from regather.rdf.terms import IRI, Literal, OWL_SAMEAS, Quad, RDFS_LABEL
from regather.vocab import LINKING_GRAPH

from conftest import LiveServer, sparql_endpoint_app

AUTHOR_LABEL = "Kumarajiva"
CBDB_URI = "https://cbdb.fixture.example/person/0001"
WIKI_URI = "https://wikidata.fixture.example/entity/Q58377"
SEAL_CLASS = "https://vocab.fixture.example/archive#Seal"
SEAL_URI = "https://objects.fixture.example/seal/translator"

G = "urn:fixture:data"


def _cbdb_quads():
    return {G: [
        Quad(IRI(CBDB_URI), IRI(RDFS_LABEL), Literal(AUTHOR_LABEL), G),
        Quad(IRI(CBDB_URI), IRI("urn:fx:dynasty"), Literal("Later Qin"), G),
        Quad(IRI(CBDB_URI), IRI(OWL_SAMEAS), IRI(WIKI_URI), G),
    ]}


def _wiki_quads():
    return {G: [
        Quad(IRI(WIKI_URI), IRI(RDFS_LABEL), Literal(AUTHOR_LABEL), G),
        Quad(IRI(WIKI_URI), IRI("urn:fx:born"), Literal("344"), G),
    ]}


@pytest.fixture(scope="module")
def endpoints():
    cbdb = LiveServer(sparql_endpoint_app(_cbdb_quads())).start()
    wiki = LiveServer(sparql_endpoint_app(_wiki_quads())).start()
    slow = LiveServer(sparql_endpoint_app(_wiki_quads(), delay=2.0)).start()
    yield {"cbdb": cbdb, "wiki": wiki, "slow": slow}
    for server in (cbdb, wiki, slow):
        server.stop()


def _register(platform, endpoints, names=("cbdb", "wiki"), timeout=5.0):
    for name in names:
        platform.federation.register_endpoint(EndpointConfig(
            name=f"{name}-fixture", url=endpoints[name].base_url + "/sparql", timeout=timeout))


def test_register_and_list(platform, endpoints):
    _register(platform, endpoints)
    assert sorted(e.name for e in platform.federation.endpoints()) == ["cbdb-fixture", "wiki-fixture"]


def test_duplicate_name(platform, endpoints):
    _register(platform, endpoints, names=("cbdb",))
    with pytest.raises(DuplicateName):
        _register(platform, endpoints, names=("cbdb",))


def test_invalid_url(platform):
    with pytest.raises(InvalidUrl):
        platform.federation.register_endpoint(EndpointConfig(name="x", url="not-a-url"))


def test_lookup_merges_same_author_into_one_card(platform, endpoints):
    _register(platform, endpoints)
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    assert all(status["ok"] for status in result.endpoints.values())
    assert len(result.cards) == 1
    card = result.cards[0]
    assert set(card.all_uris) == {CBDB_URI, WIKI_URI}
    assert card.canonical_uri == CBDB_URI  # lexicographically smallest
    assert set(card.labels) == {"cbdb-fixture", "wiki-fixture"}
    sources = {fact.source for fact in card.facts}
    assert sources == {"cbdb-fixture", "wiki-fixture"}


def test_lookup_unknown_term_local_only(platform, endpoints):
    _register(platform, endpoints)
    result = platform.federation.federated_lookup("Nobody Anywhere")
    assert result.cards == []
    assert all(status["ok"] for status in result.endpoints.values())


def test_lookup_with_no_endpoints_is_local(platform):
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    assert result.endpoints == {}
    assert result.cards == []


def test_timeout_degrades_to_partial_result(platform, endpoints):
    _register(platform, endpoints, names=("cbdb",))
    platform.federation.register_endpoint(EndpointConfig(
        name="slow-fixture", url=endpoints["slow"].base_url + "/sparql", timeout=0.4))
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    assert result.endpoints["cbdb-fixture"]["ok"]
    assert result.endpoints["slow-fixture"] == {
        "ok": False, "error": "timeout", "elapsed": result.endpoints["slow-fixture"]["elapsed"]}
    assert len(result.cards) == 1  # cbdb facts still present
    assert {f.source for f in result.cards[0].facts} == {"cbdb-fixture"}


def test_disabled_endpoint_not_queried(platform, endpoints):
    platform.federation.register_endpoint(EndpointConfig(
        name="off", url=endpoints["cbdb"].base_url + "/sparql", enabled=False))
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    assert "off" not in result.endpoints


def _annotated_object(platform, fixture_corpus):
    record = platform.import_manifest(fixture_corpus["manifests"]["keio"])
    canvas = record.resource.canvases()[0]
    platform.annotations.annotate_object_layer(
        canvas.id, RegionSelector("pixel", 5, 5, 30, 30), SEAL_CLASS,
        object_uri=SEAL_URI, body=[(RDFS_LABEL, AUTHOR_LABEL)])
    return SEAL_URI


def test_enrich_object_adds_sameas_and_facts(platform, fixture_corpus, endpoints):
    _register(platform, endpoints)
    obj = _annotated_object(platform, fixture_corpus)
    platform.annotations.annotate_semantic_layer(obj, OWL_SAMEAS, CBDB_URI)
    added = platform.federation.enrich_object(obj)
    assert added > 0
    result = platform.query(
        f"SELECT ?o WHERE {{ GRAPH <{LINKING_GRAPH}> {{ <{obj}> <{OWL_SAMEAS}> ?o }} }}")
    uris = {row[0].value for row in result.rows}
    assert {CBDB_URI, WIKI_URI} <= uris


def test_enrich_is_fixpoint(platform, fixture_corpus, endpoints):
    _register(platform, endpoints)
    obj = _annotated_object(platform, fixture_corpus)
    platform.annotations.annotate_semantic_layer(obj, OWL_SAMEAS, CBDB_URI)
    platform.federation.enrich_object(obj)
    count = platform.store.count(LINKING_GRAPH)
    assert platform.federation.enrich_object(obj) == 0
    assert platform.store.count(LINKING_GRAPH) == count


def test_enrich_by_label_only(platform, fixture_corpus, endpoints):
    _register(platform, endpoints)
    obj = _annotated_object(platform, fixture_corpus)  # has a label, no links
    added = platform.federation.enrich_object(obj)
    assert added > 0


def test_enrich_unknown_object(platform):
    with pytest.raises(UnknownObject):
        platform.federation.enrich_object("urn:ghost:object")


def test_sameas_closure_is_partition(platform, endpoints):
    """No URI lands in two cards of one lookup result."""
    _register(platform, endpoints)
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    seen = set()
    for card in result.cards:
        assert card.canonical_uri in card.all_uris
        overlap = seen & set(card.all_uris)
        assert not overlap
        seen |= set(card.all_uris)


def test_label_matcher_is_a_pluggable_scoring_hook(platform, endpoints):
    _register(platform, endpoints, names=("cbdb",))
    platform.assert_quads([Quad(IRI("urn:local:km"), IRI(RDFS_LABEL), Literal("KUMARAJIVA (monk)"),
                                LINKING_GRAPH)])
    exact = platform.federation.federated_lookup("kumarajiva")
    assert all("urn:local:km" not in card.all_uris for card in exact.cards)

    platform.federation.label_matcher = lambda candidate, term: term.lower() in candidate.lower()
    fuzzy = platform.federation.federated_lookup("kumarajiva")
    assert any("urn:local:km" in card.all_uris for card in fuzzy.cards)


def test_lookup_latency_bounded_by_endpoint_timeout(platform, endpoints):
    """Even a many-seed conversation must finish within the endpoint budget."""
    import time as _time

    platform.federation.register_endpoint(EndpointConfig(
        name="slow-many", url=endpoints["slow"].base_url + "/sparql", timeout=0.5))
    started = _time.monotonic()
    result = platform.federation.federated_lookup(AUTHOR_LABEL)
    elapsed = _time.monotonic() - started
    assert result.endpoints["slow-many"]["ok"] is False
    assert elapsed < 3.0  # well under seeds x delay; bounded by the timeout budget
