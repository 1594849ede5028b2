"""Vocabulary registry: publish, view, version, archive, roll back, diff,
search, validate, and monitor ontologies.

Only the latest version of each ontology lives in the store; every
superseded version is archived to disk as Turtle with the version number
in the file name. Versions only ever increase: a rollback re-publishes an
archived statement set under a fresh version.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import requests

from .errors import (
    DuplicatePrefix,
    UnknownMode,
    UnknownPrefix,
    UnknownVersion,
    ValidationFailed,
)
from .iiif.model import ValidationReport, Finding
from .rdf.formats import FORMAT_NAMES, dump_triples, parse_triples
from .rdf.terms import (
    IRI,
    Literal,
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_OBJECT_PROPERTY,
    Quad,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_COMMENT,
    RDFS_DOMAIN,
    RDFS_LABEL,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDF_NS,
)
from .vocab import ontology_graph

VIEW_MODES = ("class", "list", "graph", "reuse")

_WELL_KNOWN_NS = (
    "http://www.w3.org/2001/XMLSchema#",
    RDF_NS,
    "http://www.w3.org/2000/01/rdf-schema#",
    "http://www.w3.org/2002/07/owl#",
)


@dataclass
class OntologyRecord:
    prefix: str
    namespace: str
    current_version: int
    graph_name: str
    contributors: list = field(default_factory=list)
    catalog_entry: str = ""
    created_at: str = ""
    updated_at: str = ""

    def summary(self):
        return {
            "prefix": self.prefix,
            "namespace": self.namespace,
            "current_version": self.current_version,
            "contributors": self.contributors,
            "catalog_entry": self.catalog_entry,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


@dataclass
class TermIndex:
    classes: dict = field(default_factory=dict)  # iri -> {"label", "comment"}
    object_properties: dict = field(default_factory=dict)
    data_properties: dict = field(default_factory=dict)
    subclass_of: dict = field(default_factory=dict)  # iri -> [parents]
    domains: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)


def index_terms(triples):
    idx = TermIndex()
    labels = {}
    comments = {}
    for s, p, o in triples:
        if not isinstance(s, IRI):
            continue
        if p.value == RDF_TYPE and isinstance(o, IRI):
            if o.value in (OWL_CLASS, RDFS_CLASS):
                idx.classes.setdefault(s.value, {})
            elif o.value == OWL_OBJECT_PROPERTY:
                idx.object_properties.setdefault(s.value, {})
            elif o.value == OWL_DATATYPE_PROPERTY:
                idx.data_properties.setdefault(s.value, {})
            elif o.value == RDF_NS + "Property":
                idx.object_properties.setdefault(s.value, {})
        elif p.value == RDFS_LABEL and isinstance(o, Literal):
            labels.setdefault(s.value, []).append(o.lexical)
        elif p.value == RDFS_COMMENT and isinstance(o, Literal):
            comments.setdefault(s.value, []).append(o.lexical)
        elif p.value == RDFS_SUBCLASSOF and isinstance(o, IRI):
            idx.subclass_of.setdefault(s.value, []).append(o.value)
        elif p.value == RDFS_DOMAIN and isinstance(o, IRI):
            idx.domains.setdefault(s.value, []).append(o.value)
        elif p.value == RDFS_RANGE and isinstance(o, IRI):
            idx.ranges.setdefault(s.value, []).append(o.value)
    for table in (idx.classes, idx.object_properties, idx.data_properties):
        for iri, info in table.items():
            info["label"] = labels.get(iri, [None])[0]
            info["comment"] = comments.get(iri, [None])[0]
            info["labels"] = labels.get(iri, [])
    return idx


def local_name(iri):
    for sep in ("#", "/", ":"):
        if sep in iri:
            tail = iri.rsplit(sep, 1)[1]
            if tail:
                return tail
    return iri


def validate_ontology(document, format_name="ttl", namespace=None):
    """Structural findings over an ontology document; empty report = valid."""
    triples = parse_triples(document, format_name)
    idx = index_terms(triples)
    if namespace is None:
        counts = {}
        for iri in idx.classes:
            ns = iri[: len(iri) - len(local_name(iri))]
            counts[ns] = counts.get(ns, 0) + 1
        namespace = max(counts, key=counts.get) if counts else ""
    declared = set(idx.classes) | set(idx.object_properties) | set(idx.data_properties)
    findings = []

    def undeclared(target):
        return (
            target.startswith(namespace)
            and namespace != ""
            and target not in declared
            and not any(target.startswith(ns) for ns in _WELL_KNOWN_NS)
        )

    for source, parents in idx.subclass_of.items():
        for parent in parents:
            if undeclared(parent):
                findings.append(Finding("error", source, f"subclass target {parent} is not declared"))
    for prop, targets in list(idx.domains.items()) + list(idx.ranges.items()):
        for target in targets:
            if undeclared(target):
                findings.append(Finding("error", prop, f"domain/range {target} names an undeclared class"))
    dual = set(idx.classes) & (set(idx.object_properties) | set(idx.data_properties))
    for iri in sorted(dual):
        findings.append(Finding("error", iri, "term is declared as both a class and a property"))
    label_seen = {}
    for table in (idx.classes, idx.object_properties, idx.data_properties):
        for iri, info in table.items():
            if len(set(info.get("labels", []))) > 1:
                findings.append(Finding("warning", iri, "term is declared twice with conflicting labels"))
            label_seen.setdefault(iri, info.get("label"))
    return ValidationReport(findings=findings)


class OntologyCenter:
    def __init__(self, platform, archive_dir):
        self._platform = platform
        self._archive_dir = Path(archive_dir)
        self._archive_dir.mkdir(parents=True, exist_ok=True)
        self._records = {}
        self._archives = {}  # prefix -> {version: file name}

    # --- lookups ---

    def get(self, prefix):
        record = self._records.get(prefix)
        if record is None:
            raise UnknownPrefix(f"no ontology published under prefix {prefix!r}")
        return record

    def records(self):
        return list(self._records.values())

    def statements(self, prefix):
        record = self.get(prefix)
        return [q.triple() for q in self._platform.store.quads(record.graph_name)]

    def archived_versions(self, prefix):
        return sorted(self._archives.get(prefix, {}))

    # --- operations ---

    def publish_ontology(self, document, format_name, prefix, namespace, contributors=(), catalog_entry=""):
        if prefix in self._records:
            raise DuplicatePrefix(f"prefix {prefix!r} is already published")
        triples = parse_triples(document, format_name)
        report = validate_ontology(document, format_name, namespace=namespace)
        if not report.ok:
            raise ValidationFailed(f"ontology {prefix!r} failed validation", report=report)
        data = {
            "prefix": prefix,
            "namespace": namespace,
            "ttl": dump_triples(triples, "ttl"),
            "contributors": list(contributors),
            "catalog_entry": catalog_entry,
            "ts": self._platform.now(),
        }
        self._platform.commit("ontology.published", data)
        return self.get(prefix)

    def update_ontology(self, prefix, document, format_name="ttl"):
        self.get(prefix)
        triples = parse_triples(document, format_name)
        data = {"prefix": prefix, "ttl": dump_triples(triples, "ttl"), "ts": self._platform.now()}
        self._platform.commit("ontology.updated", data)
        return self.get(prefix)

    def rollback(self, prefix, version):
        record = self.get(prefix)
        if version != record.current_version and version not in self._archives.get(prefix, {}):
            raise UnknownVersion(f"{prefix} has no archived version {version}")
        data = {"prefix": prefix, "version": version, "ts": self._platform.now()}
        self._platform.commit("ontology.rolledback", data)
        return self.get(prefix)

    def diff_versions(self, prefix, a, b):
        """(added, removed) statement lists going from version a to version b."""
        first = set(self._version_statements(prefix, a))
        second = set(self._version_statements(prefix, b))
        key = lambda t: (str(t[0]), t[1].value, str(t[2]))
        return sorted(second - first, key=key), sorted(first - second, key=key)

    def _version_statements(self, prefix, version):
        record = self.get(prefix)
        if version == record.current_version:
            return self.statements(prefix)
        name = self._archives.get(prefix, {}).get(version)
        if name is None:
            raise UnknownVersion(f"{prefix} has no version {version}")
        return parse_triples((self._archive_dir / name).read_bytes(), "ttl")

    def dump(self, prefix, format_name):
        record = self.get(prefix)
        return self._platform.store.dump(record.graph_name, format_name)

    # --- views ---

    def render_view(self, prefix, mode):
        record = self.get(prefix)
        if mode not in VIEW_MODES:
            raise UnknownMode(f"unknown view mode {mode!r}; supported: {', '.join(VIEW_MODES)}")
        idx = index_terms(self.statements(prefix))
        if mode == "class":
            return self._class_view(record, idx)
        if mode == "list":
            return self._list_view(record, idx)
        if mode == "graph":
            return self._graph_view(record, idx)
        return self._reuse_view(record, idx)

    def _class_view(self, record, idx):
        children = {}
        roots = []
        for cls in idx.classes:
            parents = [p for p in idx.subclass_of.get(cls, []) if p in idx.classes]
            if parents:
                for parent in parents:
                    children.setdefault(parent, []).append(cls)
            else:
                roots.append(cls)

        def tree(iri, seen):
            node = {"iri": iri, "label": idx.classes[iri].get("label"), "children": []}
            for child in sorted(children.get(iri, [])):
                if child not in seen:
                    node["children"].append(tree(child, seen | {iri}))
            return node

        return {
            "mode": "class",
            "prefix": record.prefix,
            "version": record.current_version,
            "roots": [tree(iri, {iri}) for iri in sorted(roots)],
        }

    def _term_entries(self, table, idx):
        return [
            {
                "iri": iri,
                "name": local_name(iri),
                "label": info.get("label"),
                "comment": info.get("comment"),
                "domain": idx.domains.get(iri, []),
                "range": idx.ranges.get(iri, []),
            }
            for iri, info in sorted(table.items())
        ]

    def _list_view(self, record, idx):
        return {
            "mode": "list",
            "prefix": record.prefix,
            "version": record.current_version,
            "classes": self._term_entries(idx.classes, idx),
            "object_properties": self._term_entries(idx.object_properties, idx),
            "data_properties": self._term_entries(idx.data_properties, idx),
        }

    def _graph_view(self, record, idx):
        nodes = [
            {"id": iri, "label": info.get("label") or local_name(iri), "type": "class"}
            for iri, info in sorted(idx.classes.items())
        ]
        edges = []
        for prop in sorted(idx.object_properties):
            domain = next((d for d in idx.domains.get(prop, []) if d in idx.classes), None)
            range_ = next((r for r in idx.ranges.get(prop, []) if r in idx.classes), None)
            edges.append({
                "iri": prop,
                "label": idx.object_properties[prop].get("label") or local_name(prop),
                "source": domain,
                "target": range_,
                "type": "objectProperty",
            })
        for cls, parents in sorted(idx.subclass_of.items()):
            for parent in parents:
                if cls in idx.classes and parent in idx.classes:
                    edges.append({"iri": None, "label": "subClassOf", "source": cls, "target": parent, "type": "subclass"})
        return {
            "mode": "graph",
            "prefix": record.prefix,
            "version": record.current_version,
            "nodes": nodes,
            "edges": edges,
        }

    def _reuse_view(self, record, idx):
        view = self._graph_view(record, idx)
        view["mode"] = "reuse"
        view["editable"] = True
        for node in view["nodes"]:
            node["origin"] = "local" if node["id"].startswith(record.namespace) else "imported"
            if node["origin"] == "imported":
                node["source_namespace"] = node["id"][: len(node["id"]) - len(local_name(node["id"]))]
        for edge in view["edges"]:
            if edge["iri"]:
                edge["origin"] = "local" if edge["iri"].startswith(record.namespace) else "imported"
        return view

    # --- search ---

    def search_terms(self, query, kind=None):
        """Ranked hits over names, labels, comments, catalogs, prefixes, contributors."""
        if not query:
            return []
        needle = query.lower()
        hits = []
        for record in self._records.values():
            idx = index_terms(self.statements(record.prefix))
            tables = (
                ("class", idx.classes),
                ("object_property", idx.object_properties),
                ("data_property", idx.data_properties),
            )
            for term_kind, table in tables:
                if kind is not None and term_kind != kind:
                    continue
                for iri, info in table.items():
                    name = local_name(iri)
                    if needle == name.lower():
                        rank = 0
                    elif name.lower().startswith(needle):
                        rank = 1
                    elif needle in name.lower():
                        rank = 2
                    elif info.get("label") and needle in info["label"].lower():
                        rank = 3
                    elif info.get("comment") and needle in info["comment"].lower():
                        rank = 4
                    else:
                        continue
                    field_name = ("name", "name", "name", "label", "comment")[rank]
                    hits.append({
                        "rank": rank,
                        "prefix": record.prefix,
                        "iri": iri,
                        "kind": term_kind,
                        "matched_field": field_name,
                        "label": info.get("label"),
                    })
            if kind is None:
                if needle in record.catalog_entry.lower():
                    hits.append({"rank": 5, "prefix": record.prefix, "iri": record.namespace,
                                 "kind": "ontology", "matched_field": "catalog", "label": record.catalog_entry})
                for contributor in record.contributors:
                    if needle in contributor.lower():
                        hits.append({"rank": 6, "prefix": record.prefix, "iri": record.namespace,
                                     "kind": "ontology", "matched_field": "contributor", "label": contributor})
                if needle in record.prefix.lower():
                    hits.append({"rank": 7, "prefix": record.prefix, "iri": record.namespace,
                                 "kind": "ontology", "matched_field": "prefix", "label": record.prefix})
        hits.sort(key=lambda h: (h["rank"], h["prefix"], h["iri"]))
        return hits

    # --- monitoring ---

    def monitor_status(self, prefix, check_url=None, http_head=None):
        record = self.get(prefix)
        dumps = {}
        for format_name in FORMAT_NAMES:
            try:
                self.dump(prefix, format_name)
                dumps[format_name] = True
            except Exception:
                dumps[format_name] = False
        dereference = "unchecked"
        if check_url:
            head = http_head or requests.head
            try:
                response = head(check_url, timeout=5, allow_redirects=True)
                dereference = "reachable" if response.status_code < 400 else "unreachable"
            except requests.RequestException:
                dereference = "unreachable"
        return {
            "prefix": prefix,
            "namespace": record.namespace,
            "current_version": record.current_version,
            "statement_count": len(self.statements(prefix)),
            "dumps": dumps,
            "last_updated": record.updated_at,
            "namespace_check": dereference,
            "archived_versions": self.archived_versions(prefix),
        }

    # --- event application ---

    def _archive_current(self, record):
        name = f"{record.prefix}-v{record.current_version}.ttl"
        ttl = dump_triples(self.statements(record.prefix), "ttl")
        (self._archive_dir / name).write_text(ttl, encoding="utf-8")
        self._archives.setdefault(record.prefix, {})[record.current_version] = name

    def apply_published(self, data):
        graph_name = ontology_graph(data["prefix"])
        self._platform.store.register_graph(graph_name)
        record = OntologyRecord(
            prefix=data["prefix"],
            namespace=data["namespace"],
            current_version=1,
            graph_name=graph_name,
            contributors=data.get("contributors", []),
            catalog_entry=data.get("catalog_entry", ""),
            created_at=data["ts"],
            updated_at=data["ts"],
        )
        self._records[record.prefix] = record
        triples = parse_triples(data["ttl"], "ttl")
        self._platform.store.assert_quads(Quad(s, p, o, graph_name) for s, p, o in triples)

    def apply_updated(self, data):
        record = self._records[data["prefix"]]
        self._archive_current(record)
        triples = parse_triples(data["ttl"], "ttl")
        self._platform.store.replace_graph(record.graph_name, [Quad(s, p, o, record.graph_name) for s, p, o in triples])
        record.current_version += 1
        record.updated_at = data["ts"]

    def apply_rolledback(self, data):
        record = self._records[data["prefix"]]
        triples = self._version_statements(record.prefix, data["version"])
        self._archive_current(record)
        self._platform.store.replace_graph(record.graph_name, [Quad(s, p, o, record.graph_name) for s, p, o in triples])
        record.current_version += 1
        record.updated_at = data["ts"]

    # --- snapshot state ---

    def state_dict(self):
        return {
            "records": [
                {**record.summary(), "graph_name": record.graph_name}
                for record in self._records.values()
            ],
            "archives": {prefix: {str(v): name for v, name in table.items()} for prefix, table in self._archives.items()},
        }

    def load_state(self, state):
        for payload in state["records"]:
            record = OntologyRecord(
                prefix=payload["prefix"],
                namespace=payload["namespace"],
                current_version=payload["current_version"],
                graph_name=payload["graph_name"],
                contributors=payload.get("contributors", []),
                catalog_entry=payload.get("catalog_entry", ""),
                created_at=payload.get("created_at", ""),
                updated_at=payload.get("updated_at", ""),
            )
            self._records[record.prefix] = record
        for prefix, table in state.get("archives", {}).items():
            self._archives[prefix] = {int(v): name for v, name in table.items()}
