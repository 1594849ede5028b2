import random
from collections import Counter

import pytest

from regather.errors import ParseError, UnsupportedFeature
from regather.rdf import DatasetView, IRI, Literal, Quad, evaluate, parse_query
from regather.rdf.terms import RDF_TYPE, XSD_INTEGER

from bgp_oracle import solve
from query_gen import random_query, random_store

SEAL = "urn:vocab:Seal"
G = "urn:g:main"
LINK = "urn:g:links"


def _quads():
    L = lambda v: Literal(v)
    I = IRI
    return {
        G: [
            Quad(I("urn:o:s1"), I(RDF_TYPE), I(SEAL), G),
            Quad(I("urn:o:s1"), I("urn:p:label"), L("tibetan seal"), G),
            Quad(I("urn:o:s2"), I(RDF_TYPE), I("urn:vocab:Scroll"), G),
            Quad(I("urn:o:s2"), I("urn:p:label"), L("long scroll"), G),
            Quad(I("urn:o:s2"), I("urn:p:pages"), Literal("12", datatype=XSD_INTEGER), G),
            Quad(I("urn:o:s3"), I("urn:p:pages"), Literal("3", datatype=XSD_INTEGER), G),
        ],
        LINK: [
            Quad(I("urn:o:s1"), I("urn:p:sameAs"), I("https://ext.example/e1"), LINK),
        ],
    }


@pytest.fixture
def dataset():
    return DatasetView(_quads())


def rows(dataset, text):
    return evaluate(dataset, parse_query(text)).rows


def test_single_typed_subject(dataset):
    result = rows(dataset, f"SELECT ?s WHERE {{ ?s a <{SEAL}> }}")
    assert result == [(IRI("urn:o:s1"),)]


def test_prefix_expansion(dataset):
    text = "PREFIX v: <urn:vocab:> SELECT ?s WHERE { ?s a v:Seal }"
    assert rows(dataset, text) == [(IRI("urn:o:s1"),)]


def test_graph_scoped_query(dataset):
    text = f"SELECT ?o WHERE {{ GRAPH <{LINK}> {{ <urn:o:s1> <urn:p:sameAs> ?o }} }}"
    assert rows(dataset, text) == [(IRI("https://ext.example/e1"),)]


def test_graph_variable_binds_names(dataset):
    text = "SELECT DISTINCT ?g WHERE { GRAPH ?g { ?s ?p ?o } }"
    names = {row[0].value for row in rows(dataset, text)}
    assert names == {G, LINK}


def test_default_graph_is_union(dataset):
    text = "SELECT ?p WHERE { <urn:o:s1> ?p ?o }"
    predicates = {row[0].value for row in rows(dataset, text)}
    assert "urn:p:sameAs" in predicates and RDF_TYPE in predicates


def test_numeric_filter(dataset):
    text = "SELECT ?s WHERE { ?s <urn:p:pages> ?n . FILTER (?n > 5) }"
    assert rows(dataset, text) == [(IRI("urn:o:s2"),)]


def test_regex_filter_case_insensitive(dataset):
    text = 'SELECT ?s WHERE { ?s <urn:p:label> ?l . FILTER regex(?l, "TIBETAN", "i") }'
    assert rows(dataset, text) == [(IRI("urn:o:s1"),)]


def test_optional_keeps_unmatched(dataset):
    text = "SELECT ?s ?n WHERE { ?s <urn:p:label> ?l OPTIONAL { ?s <urn:p:pages> ?n } } ORDER BY ?s"
    result = rows(dataset, text)
    assert result == [
        (IRI("urn:o:s1"), None),
        (IRI("urn:o:s2"), Literal("12", datatype=XSD_INTEGER)),
    ]


def test_order_limit_offset(dataset):
    text = "SELECT ?s WHERE { ?s <urn:p:pages> ?n } ORDER BY DESC(?n) LIMIT 1"
    assert rows(dataset, text) == [(IRI("urn:o:s2"),)]


def test_distinct(dataset):
    text = "SELECT DISTINCT ?p WHERE { ?s ?p ?o . ?s2 ?p ?o2 }"
    result = rows(dataset, text)
    assert len(result) == len(set(result))


def test_select_star_scope_order(dataset):
    query = parse_query("SELECT * WHERE { ?b <urn:p:label> ?a }")
    assert [v.name for v in query.variables] == ["b", "a"]


@pytest.mark.parametrize("text", [
    "SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?p ?o } }",
    "SELECT (COUNT(?s) AS ?n) WHERE { ?s ?p ?o }",
    "ASK { ?s ?p ?o }",
    "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }",
    "SELECT ?s WHERE { ?s <urn:p>/<urn:q> ?o }",
    "SELECT ?s WHERE { ?s ?p ?o . FILTER (BOUND(?s)) }",
    "SELECT ?s WHERE { ?s ?p ?o } GROUP BY ?s",
    "SELECT ?s WHERE { ?s ?p ?o . MINUS { ?s a ?c } }",
    "SELECT REDUCED ?s WHERE { ?s ?p ?o }",
])
def test_out_of_subset_features_named(text):
    with pytest.raises(UnsupportedFeature):
        parse_query(text)


@pytest.mark.parametrize("text", [
    "",
    "SELECT",
    "SELECT ?s WHERE { ?s ?p }",
    "SELECT ?s WHERE { ?s ?p ?o",
    "SELECT ?s WHERE { ?s ?p ?o } ORDER BY",
    "SELECT ?s WHERE { ?s ?p ?o } LIMIT -2",
    'SELECT ?s WHERE { ?s ?p ?o . FILTER (?s ~ 3) }',
])
def test_malformed_queries_raise_with_position(text):
    with pytest.raises(ParseError) as info:
        parse_query(text)
    assert info.value.position is not None or info.value.line is not None


def test_undeclared_prefix_is_parse_error():
    with pytest.raises(ParseError):
        parse_query("SELECT ?s WHERE { ?s a missing:Thing }")


def test_filter_on_unbound_drops_solution(dataset):
    text = "SELECT ?s WHERE { ?s <urn:p:label> ?l OPTIONAL { ?s <urn:p:pages> ?n } FILTER (?n > 0) }"
    assert rows(dataset, text) == [(IRI("urn:o:s2"),)]


def test_oracle_equivalence_spot_checks():
    rng = random.Random(991)
    for _ in range(150):
        graphs = random_store(rng)
        text = random_query(rng, graphs)
        query = parse_query(text)
        engine_rows = evaluate(DatasetView(graphs), query).rows
        oracle_rows = solve(query, graphs)
        if query.order_by:
            assert engine_rows == oracle_rows, text
        else:
            assert Counter(engine_rows) == Counter(oracle_rows), text


def test_optional_filter_may_reference_outer_variables(dataset):
    """The left-join condition sees the merged solution, so an inner FILTER
    on an outer variable drops only the extension, never the left row."""
    text = (
        "SELECT ?s ?l WHERE { ?s <urn:p:pages> ?n "
        "OPTIONAL { ?s <urn:p:label> ?l . FILTER (?n > 5) } } ORDER BY ?s"
    )
    result = rows(dataset, text)
    assert result == [
        (IRI("urn:o:s2"), Literal("long scroll")),  # n=12 passes, label joins
        (IRI("urn:o:s3"), None),                    # n=3 fails, row survives bare
    ]


ADVERSARIAL = [
    "SELECT * WHERE { ?x ?x ?x }",
    "SELECT * WHERE { ?x ?x ?o }",
    'SELECT ?o WHERE { ?s <urn:p:pages> ?o . FILTER (?o = 12) }',
    "SELECT ?s WHERE { GRAPH ?g { ?s ?p ?o } . GRAPH ?g { ?s a ?c } }",
    "SELECT * WHERE { OPTIONAL { ?s <urn:p:pages> ?o } }",
    "SELECT * WHERE { ?s <urn:p:label> ?o OPTIONAL { GRAPH <urn:g:links> { ?s <urn:p:sameAs> ?t } } }",
    'SELECT * WHERE { ?s ?p ?o . FILTER (!(?o = "long scroll") || ?o != ?o) }',
    "SELECT * WHERE {}",
    "SELECT ?s WHERE { ?s ?p ?o } ORDER BY DESC(?o) ?s LIMIT 3 OFFSET 1",
    "SELECT * WHERE { GRAPH <urn:g:none> { ?s ?p ?o } }",
    "SELECT ?g WHERE { GRAPH ?g {} }",
]


@pytest.mark.parametrize("text", ADVERSARIAL)
def test_engine_matches_oracle_on_adversarial_shapes(dataset, text):
    graphs = _quads()
    query = parse_query(text)
    engine_rows = evaluate(DatasetView(graphs), query).rows
    oracle_rows = solve(query, graphs)
    if query.order_by:
        assert engine_rows == oracle_rows
    else:
        assert Counter(engine_rows) == Counter(oracle_rows)


def test_graph_wrapping_optional_agrees_with_oracle(dataset):
    graphs = _quads()
    text = ("SELECT * WHERE { GRAPH <urn:g:main> "
            "{ ?s <urn:p:label> ?l OPTIONAL { ?s <urn:p:pages> ?n } } }")
    query = parse_query(text)
    engine_rows = evaluate(DatasetView(graphs), query).rows
    assert Counter(engine_rows) == Counter(solve(query, graphs))
    assert len(engine_rows) == 2
