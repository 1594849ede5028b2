import pytest

from regather.errors import (
    DuplicatePrefix,
    ParseError,
    UnknownMode,
    UnknownPrefix,
    UnknownVersion,
    ValidationFailed,
)
from regather.fixture_data import ontology_version
from regather.ontology import validate_ontology
from regather.rdf.formats import FORMAT_NAMES, parse_triples

PREFIX = "arch"
NS = "https://vocab.fixture.example/archive#"


@pytest.fixture
def published(platform):
    platform.ontology.publish_ontology(ontology_version(1), "ttl", PREFIX, NS,
                                       contributors=["Mei Lin", "R. Okafor"],
                                       catalog_entry="Fixture vocabulary for archival objects")
    return platform.ontology


def test_publish_version_one(published):
    record = published.get(PREFIX)
    assert record.current_version == 1
    assert len(published.statements(PREFIX)) > 0


def test_publish_then_four_dumps(published):
    for format_name in FORMAT_NAMES:
        data = published.dump(PREFIX, format_name)
        assert set(parse_triples(data, format_name)) == set(published.statements(PREFIX))


def test_duplicate_prefix(published, platform):
    with pytest.raises(DuplicatePrefix):
        platform.ontology.publish_ontology(ontology_version(1), "ttl", PREFIX, NS)


def test_publish_parse_error(platform):
    with pytest.raises(ParseError):
        platform.ontology.publish_ontology("@prefix broken", "ttl", "x", "urn:x:")


def test_update_archives_previous_version(published, platform):
    published.update_ontology(PREFIX, ontology_version(2))
    record = published.get(PREFIX)
    assert record.current_version == 2
    archive_dir = platform.config.archive_dir
    files = sorted(p.name for p in archive_dir.iterdir())
    assert files == ["arch-v1.ttl"]
    assert "1" in files[0]


def test_update_with_identical_statements_still_increments(published):
    published.update_ontology(PREFIX, ontology_version(1))
    assert published.get(PREFIX).current_version == 2


def test_three_updates_archive_1_to_3(published, platform):
    for n in (2, 3, 2):
        published.update_ontology(PREFIX, ontology_version(n))
    assert published.get(PREFIX).current_version == 4
    names = sorted(p.name for p in platform.config.archive_dir.iterdir())
    assert names == ["arch-v1.ttl", "arch-v2.ttl", "arch-v3.ttl"]
    # only the latest version lives in the store
    graphs = [g for g in platform.store.graph_names() if g.endswith(":arch")]
    assert len(graphs) == 1


def test_diff_identity_is_empty(published):
    added, removed = published.diff_versions(PREFIX, 1, 1)
    assert added == [] and removed == []


def test_diff_addition_only(published):
    published.update_ontology(PREFIX, ontology_version(2))
    added, removed = published.diff_versions(PREFIX, 1, 2)
    assert removed == []
    assert {str(s) for s, _, _ in added} == {NS + "Manuscript"}


def test_diff_antisymmetry(published):
    published.update_ontology(PREFIX, ontology_version(2))
    forward = published.diff_versions(PREFIX, 1, 2)
    backward = published.diff_versions(PREFIX, 2, 1)
    assert forward == (backward[1], backward[0])


def test_diff_unknown_version(published):
    with pytest.raises(UnknownVersion):
        published.diff_versions(PREFIX, 1, 9)


def test_rollback_restores_statements_under_new_version(published):
    v1 = set(published.statements(PREFIX))
    published.update_ontology(PREFIX, ontology_version(2))
    published.update_ontology(PREFIX, ontology_version(3))
    record = published.rollback(PREFIX, 1)
    assert record.current_version == 4
    assert set(published.statements(PREFIX)) == v1
    assert published.archived_versions(PREFIX) == [1, 2, 3]


def test_rollback_to_current(published):
    current = set(published.statements(PREFIX))
    record = published.rollback(PREFIX, 1)
    assert record.current_version == 2
    assert set(published.statements(PREFIX)) == current


def test_rollback_unknown_version(published):
    with pytest.raises(UnknownVersion):
        published.rollback(PREFIX, 9)


# --- views ---

def test_class_view_hierarchy(published):
    view = published.render_view(PREFIX, "class")
    roots = {node["iri"]: node for node in view["roots"]}
    assert NS + "ArchivalObject" in roots
    children = {c["iri"] for c in roots[NS + "ArchivalObject"]["children"]}
    assert NS + "Seal" in children and NS + "Scroll" in children


def test_list_view_sections(published):
    view = published.render_view(PREFIX, "list")
    assert {c["iri"] for c in view["classes"]} >= {NS + "Seal", NS + "Scroll"}
    assert {p["iri"] for p in view["object_properties"]} == {NS + "depicts", NS + "heldBy"}
    assert {p["iri"] for p in view["data_properties"]} == {NS + "inscription"}


def test_graph_view_counts(published):
    view = published.render_view(PREFIX, "graph")
    statements = published.statements(PREFIX)
    from regather.ontology import index_terms

    idx = index_terms(statements)
    assert len(view["nodes"]) == len(idx.classes)
    assert len(view["edges"]) >= len(idx.object_properties)


def test_reuse_view_marks_imports(published):
    view = published.render_view(PREFIX, "reuse")
    assert view["editable"] is True
    assert all(node["origin"] == "local" for node in view["nodes"])


def test_unknown_mode(published):
    with pytest.raises(UnknownMode):
        published.render_view(PREFIX, "matrix")


def test_view_unknown_prefix(platform):
    with pytest.raises(UnknownPrefix):
        platform.ontology.render_view("ghost", "class")


# --- search ---

def test_search_class_by_name(published):
    hits = published.search_terms("Seal")
    assert hits[0]["kind"] == "class"
    assert hits[0]["iri"] == NS + "Seal"


def test_search_contributor(published):
    hits = published.search_terms("Okafor")
    assert any(h["matched_field"] == "contributor" for h in hits)


def test_search_across_two_ontologies(published, platform):
    other = """
    @prefix owl: <http://www.w3.org/2002/07/owl#> .
    @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
    <urn:places:SealHarbour> a owl:Class ; rdfs:label "Seal Harbour" .
    """
    platform.ontology.publish_ontology(other, "ttl", "places", "urn:places:")
    prefixes = {h["prefix"] for h in published.search_terms("seal")}
    assert prefixes == {"arch", "places"}


def test_search_kind_filter(published):
    assert all(h["kind"] == "data_property" for h in published.search_terms("inscription", kind="data_property"))


def test_empty_query_empty_result(published):
    assert published.search_terms("") == []


# --- validation ---

def test_wellformed_fixture_validates_clean():
    assert validate_ontology(ontology_version(1), "ttl", namespace=NS).findings == []


def test_undeclared_range_is_finding():
    doc = ontology_version(1) + "\narch:damagedBy a owl:ObjectProperty ; rdfs:range arch:Restorer .\n"
    report = validate_ontology(doc, "ttl", namespace=NS)
    assert len(report.errors) == 1
    assert "Restorer" in report.errors[0].message


def test_dangling_subclass_is_finding():
    doc = ontology_version(1) + "\narch:Stamp a owl:Class ; rdfs:subClassOf arch:Imprint .\n"
    report = validate_ontology(doc, "ttl", namespace=NS)
    assert any("subclass" in f.message for f in report.errors)


def test_conflicting_labels_is_warning():
    doc = ontology_version(1) + '\narch:Seal rdfs:label "Chop mark" .\n'
    report = validate_ontology(doc, "ttl", namespace=NS)
    assert any(f.severity == "warning" and "conflicting" in f.message for f in report.findings)


def test_publish_gates_on_validation(platform):
    doc = ontology_version(1) + "\narch:damagedBy a owl:ObjectProperty ; rdfs:range arch:Restorer .\n"
    with pytest.raises(ValidationFailed):
        platform.ontology.publish_ontology(doc, "ttl", "bad", NS)


# --- monitoring ---

def test_monitor_fresh(published):
    status = published.monitor_status(PREFIX)
    assert status["current_version"] == 1
    assert status["dumps"] == {f: True for f in FORMAT_NAMES}
    assert status["namespace_check"] == "unchecked"


def test_monitor_timestamp_after_update(published):
    before = published.monitor_status(PREFIX)["last_updated"]
    published.update_ontology(PREFIX, ontology_version(2))
    after = published.monitor_status(PREFIX)
    assert after["current_version"] == 2
    assert after["last_updated"] > before


def test_monitor_dereference_against_fixture_server(published, fixture_corpus):
    status = published.monitor_status(PREFIX, check_url=fixture_corpus["base_url"] + "/healthz")
    assert status["namespace_check"] == "reachable"
    status = published.monitor_status(PREFIX, check_url=fixture_corpus["base_url"] + "/definitely-missing")
    assert status["namespace_check"] == "unreachable"


def test_dump_view_statement_counts_agree(published):
    published.update_ontology(PREFIX, ontology_version(2))
    statements = set(published.statements(PREFIX))
    for format_name in FORMAT_NAMES:
        assert set(parse_triples(published.dump(PREFIX, format_name), format_name)) == statements
    list_view = published.render_view(PREFIX, "list")
    graph_view = published.render_view(PREFIX, "graph")
    assert len(graph_view["nodes"]) == len(list_view["classes"])
