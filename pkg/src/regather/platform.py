"""The platform object: one storage directory, one journal, one store.

Every mutation appends exactly one journal event and then applies it to
in-memory state under the writer lock; recovery loads the newest snapshot
and replays the journal tail through the same appliers. Reads never block
on writers: the store publishes immutable snapshots and registry listings
copy under a short lock.
"""

from __future__ import annotations

import datetime
import threading

from .annotations import AnnotationLayers
from .compose import Composer, CompositionSpec
from .config import PlatformConfig
from .errors import UnknownResource
from .federation import Federation
from .ids import new_ulid
from .journal import Journal, SnapshotStore
from .ocr import HttpOcrProvider, OcrBridge, StubOcrProvider
from .ontology import OntologyCenter
from .rdf.ntriples import parse_ntriples
from .rdf.store import QuadStore
from .rdf.terms import Quad, nt_term
from .registry import Registry
from .vocab import CORE_GRAPHS


class Platform:
    def __init__(self, config=None):
        self.config = (config or PlatformConfig()).check()
        self._write_lock = threading.RLock()
        self._import_locks = {}
        self._ts_lock = threading.Lock()
        self._last_ts = ""

        self.store = QuadStore(CORE_GRAPHS)
        self.journal = Journal(self.config.journal_path)
        self.snapshots = SnapshotStore(self.config.snapshot_dir)
        self.registry = Registry(self)
        self.composer = Composer(self)
        self.annotations = AnnotationLayers(self)
        self.ontology = OntologyCenter(self, self.config.archive_dir)
        self.federation = Federation(self)
        self.ocr = OcrBridge(self)

        self._configure_providers()
        self.federation.load_config_endpoints(self.config.endpoints)
        self._recover()

    # --- infrastructure ---

    def now(self):
        """UTC ISO timestamp, strictly increasing within this process."""
        with self._ts_lock:
            stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")
            if stamp <= self._last_ts:
                head, micros = self._last_ts[:-1].rsplit(".", 1)
                bumped = int(micros) + 1
                if bumped >= 1_000_000:
                    stamp = self._last_ts  # same microsecond rollover; accept equality
                else:
                    stamp = f"{head}.{bumped:06d}Z"
            self._last_ts = stamp
            return stamp

    def mint_uri(self, *segments):
        return "/".join([self.config.platform_base, *segments, new_ulid()])

    def commit(self, kind, data):
        """Journal one event and apply it atomically."""
        with self._write_lock:
            self.journal.append(kind, self.now(), data)
            self._apply(kind, data)
            if self.config.snapshot_every and self.journal.count % self.config.snapshot_every == 0:
                self.write_snapshot()

    def _apply(self, kind, data):
        if kind == "quads.asserted":
            quads = [self._decode_quad(entry) for entry in data["quads"]]
            self.store.assert_quads(quads)
        elif kind == "resource.registered":
            self.registry.apply_registered(data)
        elif kind == "annotation.created":
            self.annotations.apply_created(data)
        elif kind == "ontology.published":
            self.ontology.apply_published(data)
        elif kind == "ontology.updated":
            self.ontology.apply_updated(data)
        elif kind == "ontology.rolledback":
            self.ontology.apply_rolledback(data)
        elif kind == "endpoint.registered":
            self.federation.apply_registered(data)
        elif kind == "ocr.recognized":
            self.ocr.apply_recognized(data)
        elif kind == "ocr.proofread":
            self.ocr.apply_proofread(data)
        elif kind == "graph.registered":
            self.store.register_graph(data["name"])
        else:
            raise ValueError(f"unknown journal event kind {kind!r}")

    @staticmethod
    def _encode_quad(quad):
        return [nt_term(quad.subject), nt_term(quad.predicate), nt_term(quad.object), quad.graph]

    @staticmethod
    def _decode_quad(entry):
        s, p, o, graph = entry
        (triple,) = parse_ntriples(f"{s} {p} {o} .")
        return Quad(triple[0], triple[1], triple[2], graph)

    def _recover(self):
        offset, state = self.snapshots.latest()
        if state is not None:
            self._load_state(state)
        for kind, data in self.journal.replay(start=offset):
            self._apply(kind, data)

    def _configure_providers(self):
        stub_settings = self.config.providers.get("stub", {})
        self.ocr.configure_provider("stub", StubOcrProvider(stub_settings.get("table", {})))
        http_settings = self.config.providers.get("http")
        if http_settings and http_settings.get("url"):
            self.ocr.configure_provider(
                "http",
                HttpOcrProvider(
                    http_settings["url"],
                    credential_env=http_settings.get("credential_env"),
                    timeout=float(http_settings.get("timeout", 30.0)),
                ),
            )

    # --- snapshots ---

    def _state_dict(self):
        return {
            "graphs": list(self.store.graph_names()),
            "quads": [self._encode_quad(q) for q in self.store.quads()],
            "registry": self.registry.state_dict(),
            "annotations": self.annotations.state_dict(),
            "ontology": self.ontology.state_dict(),
            "ocr": self.ocr.state_dict(),
            "federation": self.federation.state_dict(),
        }

    def _load_state(self, state):
        for name in state["graphs"]:
            self.store.register_graph(name)
        self.store.assert_quads(self._decode_quad(entry) for entry in state["quads"])
        self.registry.load_state(state["registry"])
        self.annotations.load_state(state["annotations"])
        self.ontology.load_state(state["ontology"])
        self.ocr.load_state(state["ocr"])
        self.federation.load_state(state["federation"])

    def write_snapshot(self):
        with self._write_lock:
            return self.snapshots.write(self.journal.count, self._state_dict())

    def close(self):
        self.journal.close()

    # --- registry facade ---

    def import_manifest(self, uri):
        lock = self._import_locks.setdefault(uri, threading.Lock())
        with lock:  # concurrent imports of one URI serialize and agree
            return self.registry.import_manifest(uri)

    def upload_manifest(self, document):
        return self.registry.upload_manifest(document)

    def list_registered(self, kind=None, source=None):
        return self.registry.list_registered(kind=kind, source=source)

    def trace_gene_chain(self, uri):
        return self.registry.trace_gene_chain(uri)

    def import_many(self, uris):
        """Bounded-parallel import; distinct URIs proceed concurrently."""
        from concurrent.futures import ThreadPoolExecutor

        limit = max(1, self.config.fetch.max_parallel)
        with ThreadPoolExecutor(max_workers=limit) as pool:
            return list(pool.map(self.import_manifest, uris))

    # --- composition facade ---

    def compose_manifest(self, label, members, metadata=()):
        spec = CompositionSpec(label=_label_map(label), members=list(members), metadata=list(metadata))
        return self.composer.compose_manifest(spec)

    def compose_collection(self, label, members, metadata=()):
        spec = CompositionSpec(label=_label_map(label), members=list(members), metadata=list(metadata))
        return self.composer.compose_collection(spec)

    def resolve(self, local_uri):
        return self.composer.resolve(local_uri)

    def resolve_by_tail(self, kind, identifier):
        """Look up a registered resource by the {kind}/{id} tail of its URI."""
        local_uri = f"{self.config.platform_base}/iiif/{kind}/{identifier}"
        try:
            return self.resolve(local_uri)
        except UnknownResource:
            raise UnknownResource(f"no registered {kind} with id {identifier}") from None

    # --- store facade ---

    def assert_quads(self, quads):
        """Journaled durable insert; no event when every quad is already present."""
        quads = list(quads)
        with self._write_lock:
            existing = set(self.store.quads())
            new = [q for q in quads if q not in existing]
            new = list(dict.fromkeys(new))
            if not new:
                return 0
            self.commit("quads.asserted", {"quads": [self._encode_quad(q) for q in new]})
            return len(new)

    def query(self, text):
        return self.store.query(text)

    def dump(self, graph, format_name):
        return self.store.dump(graph, format_name)

    def load(self, data, format_name, graph):
        from .rdf.formats import parse_triples

        triples = parse_triples(data, format_name)
        return self.assert_quads(Quad(s, p, o, graph) for s, p, o in triples)

    def map_tabular_metadata(self, rows, mapping, subject_column, graph):
        from .errors import EmptyMapping, MissingColumn
        from .rdf.terms import IRI, Literal

        if not mapping:
            raise EmptyMapping("column mapping is empty")
        quads = []
        for index, row in enumerate(rows):
            if subject_column not in row or not str(row[subject_column]).strip():
                raise MissingColumn(f"row {index} has no {subject_column!r} value")
            cell = str(row[subject_column]).strip()
            subject = cell if ("://" in cell or cell.startswith("urn:")) else (
                self.config.platform_base + "/subject/" + cell.replace(" ", "_")
            )
            for column, predicate in mapping.items():
                value = row.get(column)
                if value is None or str(value) == "":
                    continue
                quads.append(Quad(IRI(subject), IRI(predicate), Literal(str(value)), graph))
        return self.assert_quads(quads)


def _label_map(label):
    if isinstance(label, dict):
        return label
    return {"none": [str(label)]}
