"""Cross-knowledge-base lookup over SPARQL endpoints.

Fans out to every enabled endpoint in parallel, merges the returned URIs
with local linking-graph knowledge by sameAs closure, and reports
per-endpoint failures inside the result envelope instead of raising:
with endpoints down or slow, lookups degrade to partial results.
"""

from __future__ import annotations

import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from .errors import DuplicateName, InvalidUrl, UnknownObject
from .iiif.model import is_absolute_uri
from .rdf.terms import IRI, Literal, OWL_SAMEAS, Quad, RDFS_LABEL
from .vocab import LINKING_GRAPH

DEFAULT_LABEL_TEMPLATE = (
    "SELECT ?s WHERE {{ ?s <http://www.w3.org/2000/01/rdf-schema#label> ?l . "
    'FILTER regex(?l, "{term}", "i") }}'
)
FACTS_TEMPLATE = "SELECT ?p ?o WHERE {{ <{uri}> ?p ?o }}"
MAX_SEEDS_PER_ENDPOINT = 10


@dataclass
class EndpointConfig:
    name: str
    url: str
    query_template: str = DEFAULT_LABEL_TEMPLATE
    timeout: float = 10.0
    enabled: bool = True

    def as_dict(self):
        return {
            "name": self.name,
            "url": self.url,
            "query_template": self.query_template,
            "timeout": self.timeout,
            "enabled": self.enabled,
        }


@dataclass(frozen=True)
class AttributedFact:
    subject: str
    predicate: str
    object: object  # Term
    source: str

    def as_dict(self):
        obj = self.object
        if isinstance(obj, Literal):
            value = {"type": "literal", "value": obj.lexical}
            if obj.language:
                value["lang"] = obj.language
            if obj.datatype:
                value["datatype"] = obj.datatype
        else:
            value = {"type": "uri", "value": str(obj)}
        return {"subject": self.subject, "predicate": self.predicate, "object": value, "source": self.source}


@dataclass
class EntityCard:
    canonical_uri: str
    all_uris: tuple
    labels: dict = field(default_factory=dict)  # source -> [labels]
    facts: list = field(default_factory=list)

    def as_dict(self):
        return {
            "canonical_uri": self.canonical_uri,
            "all_uris": list(self.all_uris),
            "labels": self.labels,
            "facts": [f.as_dict() for f in self.facts],
        }


@dataclass
class LookupResult:
    cards: list
    endpoints: dict  # name -> {"ok", "error", "elapsed"}

    def as_dict(self):
        return {"cards": [c.as_dict() for c in self.cards], "endpoints": self.endpoints}


def parse_sparql_json(payload):
    """Decode SPARQL JSON results into a list of {var: Term} rows."""
    rows = []
    for binding in payload.get("results", {}).get("bindings", []):
        row = {}
        for name, cell in binding.items():
            kind = cell.get("type")
            if kind == "uri":
                row[name] = IRI(cell["value"])
            elif kind == "bnode":
                row[name] = IRI("_:" + cell["value"])
            else:
                row[name] = Literal(
                    cell.get("value", ""),
                    datatype=cell.get("datatype"),
                    language=cell.get("xml:lang"),
                )
        rows.append(row)
    return rows


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, item):
        self.parent.setdefault(item, item)
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def exact_label_match(candidate, term):
    """Default resource-similarity scoring: exact label equality. Swap in a
    fuzzier callable via Federation.label_matcher to widen local matching."""
    return candidate == term


class Federation:
    def __init__(self, platform, label_matcher=exact_label_match):
        self._platform = platform
        self._endpoints = {}
        self.label_matcher = label_matcher

    # --- endpoint registry ---

    def register_endpoint(self, config):
        if config.name in self._endpoints:
            raise DuplicateName(f"endpoint {config.name!r} is already registered")
        if not config.url.startswith(("http://", "https://")):
            raise InvalidUrl(f"endpoint url must be http(s), got {config.url!r}")
        self._platform.commit("endpoint.registered", config.as_dict())

    def endpoints(self):
        return list(self._endpoints.values())

    def apply_registered(self, data):
        config = EndpointConfig(**data)
        self._endpoints[config.name] = config

    def load_config_endpoints(self, configs):
        """Endpoints from the platform config file; not journaled."""
        for config in configs:
            self._endpoints.setdefault(config.name, config)

    # --- lookup ---

    def _query_endpoint(self, config, query):
        response = requests.get(
            config.url,
            params={"query": query},
            headers={"Accept": "application/sparql-results+json"},
            timeout=config.timeout,
        )
        if response.status_code >= 400:
            raise requests.HTTPError(f"HTTP {response.status_code}")
        return parse_sparql_json(response.json())

    def _lookup_one(self, config, term):
        """Returns (seed URIs, facts) found at one endpoint. The whole
        conversation shares one deadline so a lookup never takes longer
        than the endpoint's configured timeout."""
        deadline = time.monotonic() + config.timeout
        seeds = []
        if is_absolute_uri(term) and "://" in term:
            seeds.append(term)
        else:
            pattern = "^" + re.escape(term) + "$"
            query = config.query_template.format(term=pattern.replace('"', '\\"'))
            for row in self._query_endpoint(config, query):
                value = row.get("s")
                if isinstance(value, IRI):
                    seeds.append(value.value)
        seeds = seeds[:MAX_SEEDS_PER_ENDPOINT]
        facts = []
        for seed in seeds:
            if time.monotonic() > deadline:
                raise requests.Timeout(f"endpoint {config.name} exceeded its {config.timeout}s budget")
            for row in self._query_endpoint(config, FACTS_TEMPLATE.format(uri=seed)):
                pred, obj = row.get("p"), row.get("o")
                if pred is None or obj is None:
                    continue
                facts.append(AttributedFact(seed, pred.value, obj, config.name))
        return seeds, facts

    def _local_lookup(self, term):
        seeds = set()
        facts = []
        snapshot = self._platform.store.snapshot()
        if is_absolute_uri(term) and "://" in term:
            seeds.add(term)
        for quad in snapshot.union.quads:
            if (
                quad.predicate.value == RDFS_LABEL
                and isinstance(quad.object, Literal)
                and self.label_matcher(quad.object.lexical, term)
                and isinstance(quad.subject, IRI)
            ):
                seeds.add(quad.subject.value)
        for quad in snapshot.union.quads:
            if isinstance(quad.subject, IRI) and quad.subject.value in seeds:
                facts.append(AttributedFact(quad.subject.value, quad.predicate.value, quad.object, "local"))
        return sorted(seeds), facts

    def federated_lookup(self, term):
        """Merge endpoint answers for a label or URI into sameAs-closed cards."""
        statuses = {}
        all_seeds = set()
        all_facts = []

        seeds, facts = self._local_lookup(term)
        all_seeds.update(seeds)
        all_facts.extend(facts)

        enabled = [c for c in self._endpoints.values() if c.enabled]
        if enabled:
            started = time.monotonic()
            with ThreadPoolExecutor(max_workers=max(len(enabled), 1)) as pool:
                futures = {pool.submit(self._lookup_one, config, term): config for config in enabled}
                for future, config in futures.items():
                    try:
                        seeds, facts = future.result()
                        all_seeds.update(seeds)
                        all_facts.extend(facts)
                        statuses[config.name] = {"ok": True, "error": None,
                                                 "elapsed": round(time.monotonic() - started, 3)}
                    except requests.Timeout:
                        statuses[config.name] = {"ok": False, "error": "timeout",
                                                 "elapsed": round(time.monotonic() - started, 3)}
                    except Exception as exc:
                        statuses[config.name] = {"ok": False, "error": str(exc),
                                                 "elapsed": round(time.monotonic() - started, 3)}

        uf = _UnionFind()
        for uri in all_seeds:
            uf.find(uri)
        for quad in self._platform.store.quads(LINKING_GRAPH):
            if quad.predicate.value == OWL_SAMEAS and isinstance(quad.subject, IRI) and isinstance(quad.object, IRI):
                uf.union(quad.subject.value, quad.object.value)
        for fact in all_facts:
            if fact.predicate == OWL_SAMEAS and isinstance(fact.object, IRI):
                uf.union(fact.subject, fact.object.value)

        classes = {}
        for uri in list(uf.parent):
            classes.setdefault(uf.find(uri), set()).add(uri)
        cards = []
        for root, uris in classes.items():
            if not uris & all_seeds:
                continue
            labels = {}
            card_facts = [f for f in all_facts if f.subject in uris]
            for fact in card_facts:
                if fact.predicate == RDFS_LABEL and isinstance(fact.object, Literal):
                    labels.setdefault(fact.source, []).append(fact.object.lexical)
            cards.append(EntityCard(
                canonical_uri=min(uris),
                all_uris=tuple(sorted(uris)),
                labels=labels,
                facts=card_facts,
            ))
        cards.sort(key=lambda c: c.canonical_uri)
        return LookupResult(cards=cards, endpoints=statuses)

    def enrich_object(self, object_uri):
        """Pull sameAs closure and facts for one annotated object into the
        linking graph; returns the number of quads that are new."""
        annotations = self._platform.annotations
        links = annotations.semantic_links(object_uri)
        labels = annotations.object_labels(object_uri)
        if not annotations.object_known(object_uri) and not links:
            raise UnknownObject(f"{object_uri} has no annotations or semantic links")
        if not links and not labels:
            raise UnknownObject(f"{object_uri} has no links and no label to seed a lookup")

        seed_terms = [(target, False) for _, target in links] + [(label, True) for label in labels]
        closure = {object_uri} | {target for _, target in links}
        new_quads = []
        seen_cards = set()
        for term, is_label in seed_terms:
            result = self.federated_lookup(term)
            for card in result.cards:
                # resource similarity = exact-label match plus sameAs closure:
                # label-seeded cards qualify outright, URI seeds must reach the closure
                if not is_label and not (set(card.all_uris) & closure):
                    continue
                if card.canonical_uri in seen_cards:
                    continue
                seen_cards.add(card.canonical_uri)
                for uri in card.all_uris:
                    if uri != object_uri:
                        new_quads.append(Quad(IRI(object_uri), IRI(OWL_SAMEAS), IRI(uri), LINKING_GRAPH))
                for fact in card.facts:
                    if fact.source == "local":
                        continue
                    new_quads.append(Quad(IRI(fact.subject), IRI(fact.predicate), fact.object, LINKING_GRAPH))
        return self._platform.assert_quads(new_quads)

    # --- snapshot state ---

    def state_dict(self):
        return {"endpoints": [c.as_dict() for c in self._endpoints.values()]}

    def load_state(self, state):
        for data in state.get("endpoints", []):
            self._endpoints[data["name"]] = EndpointConfig(**data)
