"""In-memory quad store with named graphs, snapshot-isolated reads.

Mutations happen under a single writer lock and atomically publish a fresh
immutable DatasetView; queries and dumps read whichever snapshot was
committed when they started. Durability is layered on top by the platform
journal, which replays mutation events through this store on startup.
"""

from __future__ import annotations

import threading
from urllib.parse import quote

from ..errors import EmptyMapping, MissingColumn, UnknownGraph
from .engine import DatasetView, evaluate
from .formats import dump_triples, normalize_format, parse_triples
from .sparql import parse_query
from .terms import IRI, Literal, Quad, check_quad


def _default_subject_minter(cell):
    return "urn:row:" + quote(cell, safe="")


def _looks_absolute(value):
    return "://" in value or value.startswith("urn:")


class QuadStore:
    def __init__(self, graphs=()):
        self._lock = threading.RLock()
        self._graphs = {}
        self._members = set()
        self._snapshot = DatasetView({})
        for name in graphs:
            self.register_graph(name)

    # --- graph management ---

    def register_graph(self, name):
        with self._lock:
            if name not in self._graphs:
                self._graphs[name] = []
                self._publish()

    def graph_names(self):
        return tuple(self._graphs)

    def has_graph(self, name):
        return name in self._graphs

    def _require_graph(self, name):
        if name not in self._graphs:
            raise UnknownGraph(f"graph {name!r} is not registered")

    def _publish(self):
        self._snapshot = DatasetView({name: tuple(quads) for name, quads in self._graphs.items()})

    # --- writes ---

    def assert_quads(self, quads):
        """Insert with set semantics; returns the number of newly present quads."""
        quads = list(quads)
        for quad in quads:
            check_quad(quad)
            self._require_graph(quad.graph)
        with self._lock:
            added = 0
            for quad in quads:
                if quad not in self._members:
                    self._members.add(quad)
                    self._graphs[quad.graph].append(quad)
                    added += 1
            if added:
                self._publish()
            return added

    def load(self, data, format_name, graph):
        """Parse a document in one of the four formats into a named graph."""
        self._require_graph(graph)
        triples = parse_triples(data, format_name)
        return self.assert_quads(Quad(s, p, o, graph) for s, p, o in triples)

    def replace_graph(self, graph, quads):
        """Swap a graph's entire content; used by ontology versioning only
        (assert/load stay monotone)."""
        self._require_graph(graph)
        quads = list(dict.fromkeys(quads))
        for quad in quads:
            check_quad(quad)
            if quad.graph != graph:
                raise UnknownGraph(f"replacement quad names graph {quad.graph!r}, expected {graph!r}")
        with self._lock:
            self._members.difference_update(self._graphs[graph])
            self._graphs[graph] = quads
            self._members.update(quads)
            self._publish()

    def map_tabular_metadata(self, rows, mapping, subject_column, graph, subject_minter=None):
        """One quad per non-empty mapped cell; subjects minted from the subject column."""
        if not mapping:
            raise EmptyMapping("column mapping is empty")
        self._require_graph(graph)
        minter = subject_minter or _default_subject_minter
        quads = []
        for index, row in enumerate(rows):
            if subject_column not in row or not str(row[subject_column]).strip():
                raise MissingColumn(f"row {index} has no {subject_column!r} value")
            cell = str(row[subject_column]).strip()
            subject = IRI(cell) if _looks_absolute(cell) else IRI(minter(cell))
            for column, predicate in mapping.items():
                value = row.get(column)
                if value is None or str(value) == "":
                    continue
                quads.append(Quad(subject, IRI(predicate), Literal(str(value)), graph))
        return self.assert_quads(quads)

    # --- reads ---

    def snapshot(self):
        return self._snapshot

    def quads(self, graph=None):
        view = self._snapshot
        if graph is None:
            return view.union.quads
        self._require_graph(graph)
        return view.view(graph).quads

    def count(self, graph=None):
        return len(self.quads(graph))

    def query(self, text):
        """Run a SPARQL-subset query against the committed snapshot."""
        return evaluate(self._snapshot, parse_query(text))

    def dump(self, graph, format_name):
        """Serialize one graph in one of exactly four formats; returns bytes."""
        self._require_graph(graph)
        normalize_format(format_name)  # reject unknown formats before touching data
        triples = [quad.triple() for quad in self._snapshot.view(graph).quads]
        return dump_triples(triples, format_name).encode("utf-8")

    # --- journal support ---

    def state_quads(self):
        """All quads in insertion order, for snapshots."""
        return {name: list(quads) for name, quads in self._graphs.items()}
