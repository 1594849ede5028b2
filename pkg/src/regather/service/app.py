"""HTTP surface binding every subsystem.

The async wrappers only read request bodies; all real work runs in the
thread pool, so requests stay concurrent while mutations funnel through
the platform writer lock. Error bodies are uniform {error, message, path}
JSON with statuses mapped from the error taxonomy.
"""

from __future__ import annotations

import json
import threading

from starlette.applications import Starlette
from starlette.concurrency import run_in_threadpool
from starlette.middleware import Middleware
from starlette.middleware.cors import CORSMiddleware
from starlette.responses import JSONResponse, PlainTextResponse, Response
from starlette.routing import Route

from .. import __version__
from ..annotations import RegionSelector
from ..errors import (
    InvalidParameter,
    ParseError,
    RegatherError,
    UnknownResource,
)
from ..federation import DEFAULT_LABEL_TEMPLATE, EndpointConfig
from ..iiif.serialize import presentation_json
from ..rdf.formats import MEDIA_TYPES, normalize_format
from ..rdf.terms import nt_term
from ..vocab import ANNOTATION_GRAPH, COLLECTION_GRAPH, LINKING_GRAPH, MANIFEST_GRAPH

_MUTATING = {"POST", "PUT", "PATCH", "DELETE"}

GRAPH_SHORTHAND = {
    "collection": COLLECTION_GRAPH,
    "manifest": MANIFEST_GRAPH,
    "annotation": ANNOTATION_GRAPH,
    "linking": LINKING_GRAPH,
}


def _json_body(raw):
    if not raw:
        return {}
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"request body is not JSON: {exc.msg}") from exc


def _solution_json(solution):
    bindings = []
    for row in solution.rows:
        binding = {}
        for name, term in zip(solution.variables, row):
            if term is None:
                continue
            kind = type(term).__name__
            if kind == "IRI":
                binding[name] = {"type": "uri", "value": term.value}
            elif kind == "BlankNode":
                binding[name] = {"type": "bnode", "value": term.label}
            else:
                cell = {"type": "literal", "value": term.lexical}
                if term.language:
                    cell["xml:lang"] = term.language
                elif term.datatype:
                    cell["datatype"] = term.datatype
                binding[name] = cell
        bindings.append(binding)
    return {"head": {"vars": list(solution.variables)}, "results": {"bindings": bindings}}


def build_app(platform):
    jobs = {}
    jobs_lock = threading.Lock()

    def route(path, methods):
        """Wrap a sync (request, body) handler with auth, body read, errors."""

        def register(handler):
            async def endpoint(request):
                token = platform.config.token
                if token and request.method in _MUTATING:
                    supplied = request.headers.get("authorization", "")
                    if supplied != f"Bearer {token}":
                        return JSONResponse(
                            {"error": "unauthorized", "message": "missing or wrong bearer token",
                             "path": request.url.path},
                            status_code=401,
                        )
                raw = await request.body() if request.method in _MUTATING else b""
                try:
                    return await run_in_threadpool(handler, request, raw)
                except RegatherError as exc:
                    body = exc.as_dict()
                    body["path"] = request.url.path
                    return JSONResponse(body, status_code=exc.http_status)

            routes.append(Route(path, endpoint, methods=methods, name=handler.__name__))
            return handler

        return register

    routes = []

    # --- core ---

    @route("/healthz", ["GET"])
    def healthz(request, raw):
        return JSONResponse({"status": "ok", "version": __version__,
                             "platform_base": platform.config.platform_base})

    @route("/iiif/{kind}/{id}", ["GET"])
    def iiif_resource(request, raw):
        resource = platform.resolve_by_tail(request.path_params["kind"], request.path_params["id"])
        return JSONResponse(presentation_json(resource), media_type="application/ld+json")

    @route("/registry", ["GET"])
    def registry_list(request, raw):
        return JSONResponse({"items": platform.list_registered(
            kind=request.query_params.get("kind"), source=request.query_params.get("source"))})

    @route("/import", ["POST"])
    def import_route(request, raw):
        payload = _json_body(raw)
        uri = payload.get("uri")
        if not uri:
            raise InvalidParameter("import requires {'uri': ...}")
        if payload.get("async"):
            job_id = platform.mint_uri("job").rsplit("/", 1)[1]
            with jobs_lock:
                jobs[job_id] = {"status": "running", "result": None, "error": None}

            def run():
                try:
                    record = platform.import_manifest(uri)
                    with jobs_lock:
                        jobs[job_id] = {"status": "done", "result": record.summary(), "error": None}
                except RegatherError as exc:
                    with jobs_lock:
                        jobs[job_id] = {"status": "failed", "result": None, "error": exc.as_dict()}

            threading.Thread(target=run, daemon=True).start()
            return JSONResponse({"job": job_id}, status_code=202)
        record = platform.import_manifest(uri)
        return JSONResponse(record.summary(), status_code=201)

    @route("/jobs/{id}", ["GET"])
    def job_status(request, raw):
        with jobs_lock:
            job = jobs.get(request.path_params["id"])
        if job is None:
            raise UnknownResource(f"no job {request.path_params['id']}")
        return JSONResponse(job)

    @route("/upload", ["POST"])
    def upload_route(request, raw):
        payload = _json_body(raw)
        document = payload.get("document", payload)
        record = platform.upload_manifest(json.dumps(document).encode("utf-8"))
        return JSONResponse(record.summary(), status_code=201)

    def _metadata_pairs(payload):
        return [
            ({"none": [str(entry.get("label", ""))]}, {"none": [str(entry.get("value", ""))]})
            for entry in payload.get("metadata", [])
        ]

    @route("/compose/manifest", ["POST"])
    def compose_manifest_route(request, raw):
        payload = _json_body(raw)
        record = platform.compose_manifest(
            payload.get("label", "Composite manifest"), payload.get("members", []),
            metadata=_metadata_pairs(payload))
        return JSONResponse(record.summary(), status_code=201)

    @route("/compose/collection", ["POST"])
    def compose_collection_route(request, raw):
        payload = _json_body(raw)
        record = platform.compose_collection(
            payload.get("label", "Composite collection"), payload.get("members", []),
            metadata=_metadata_pairs(payload))
        return JSONResponse(record.summary(), status_code=201)

    def _provenance(request, raw):
        identifier = request.path_params.get("id")
        uri = request.query_params.get("uri")
        if uri is None:
            base = platform.config.platform_base
            for kind in ("canvas", "manifest", "collection"):
                candidate = f"{base}/iiif/{kind}/{identifier}"
                try:
                    chain = platform.trace_gene_chain(candidate)
                    return JSONResponse({"uri": candidate, "chain": [l.as_dict() for l in chain]})
                except UnknownResource:
                    continue
            raise UnknownResource(f"no registered resource with id {identifier}")
        chain = platform.trace_gene_chain(uri)
        return JSONResponse({"uri": uri, "chain": [l.as_dict() for l in chain]})

    route("/provenance/{id}", ["GET"])(_provenance)
    route("/provenance", ["GET"])(lambda request, raw: _provenance(request, raw))

    # --- annotations ---

    @route("/annotations", ["GET", "POST"])
    def annotations_route(request, raw):
        if request.method == "GET":
            object_uri = request.query_params.get("object")
            if object_uri:
                occurrences = platform.annotations.find_object_occurrences(object_uri)
                return JSONResponse({
                    "object": object_uri,
                    "occurrences": [
                        {"canvas": canvas, "region": region.as_dict() if region else None}
                        for canvas, region in occurrences
                    ],
                })
            target = request.query_params.get("target")
            annotations = platform.annotations.for_target(target) if target else platform.annotations.all()
            return JSONResponse({"type": "AnnotationPage", "items": [a.as_web_annotation() for a in annotations]})

        payload = _json_body(raw)
        if payload.get("type") in ("Annotation", "AnnotationPage"):
            created = platform.annotations.import_web_annotation(payload)
            return JSONResponse(
                {"type": "AnnotationPage", "items": [a.as_web_annotation() for a in created]},
                status_code=201,
            )
        layer = payload.get("layer")
        creator = payload.get("creator", "anonymous")
        if layer == "image":
            pairs = [(e["predicate"], e["value"]) for e in payload.get("metadata", [])]
            annotation = platform.annotations.annotate_image_layer(payload.get("target"), pairs, creator=creator)
        elif layer == "object":
            annotation = platform.annotations.annotate_object_layer(
                payload.get("target"),
                RegionSelector.from_dict(payload["region"]),
                payload.get("object_class"),
                object_uri=payload.get("object_uri"),
                body=[(e["predicate"], e["value"]) for e in payload.get("body", [])],
                creator=creator,
            )
        elif layer == "semantic":
            annotation = platform.annotations.annotate_semantic_layer(
                payload.get("subject"), payload.get("predicate"), payload.get("target"), creator=creator)
        else:
            raise InvalidParameter("layer must be one of image, object, semantic")
        return JSONResponse(annotation.as_web_annotation(), status_code=201)

    # --- SPARQL protocol (query only) ---

    @route("/sparql", ["GET", "POST"])
    def sparql_route(request, raw):
        if request.method == "GET":
            query = request.query_params.get("query")
        elif "application/sparql-query" in request.headers.get("content-type", ""):
            query = raw.decode("utf-8")
        else:
            query = _json_body(raw).get("query")
        if not query:
            raise ParseError("missing query parameter")
        solution = platform.query(query)
        return JSONResponse(_solution_json(solution), media_type="application/sparql-results+json")

    @route("/graphs/{name}/dump", ["GET"])
    def graph_dump_route(request, raw):
        graph_name = GRAPH_SHORTHAND.get(request.path_params["name"], request.path_params["name"])
        format_name = request.query_params.get("format", "nt")
        data = platform.dump(graph_name, format_name)
        return Response(data, media_type=MEDIA_TYPES[normalize_format(format_name)])

    # --- ontology service center ---

    @route("/osc", ["GET"])
    def osc_list(request, raw):
        return JSONResponse({"items": [r.summary() for r in platform.ontology.records()]})

    @route("/osc/search", ["GET"])
    def osc_search(request, raw):
        return JSONResponse({"items": platform.ontology.search_terms(
            request.query_params.get("q", ""), kind=request.query_params.get("kind"))})

    @route("/osc/{prefix}", ["POST"])
    def osc_publish(request, raw):
        payload = _json_body(raw)
        record = platform.ontology.publish_ontology(
            payload.get("document", ""), payload.get("format", "ttl"),
            request.path_params["prefix"], payload.get("namespace", ""),
            contributors=payload.get("contributors", []),
            catalog_entry=payload.get("catalog_entry", ""))
        return JSONResponse(record.summary(), status_code=201)

    @route("/osc/{prefix}/update", ["POST"])
    def osc_update(request, raw):
        payload = _json_body(raw)
        record = platform.ontology.update_ontology(
            request.path_params["prefix"], payload.get("document", ""), payload.get("format", "ttl"))
        return JSONResponse(record.summary())

    @route("/osc/{prefix}/rollback", ["POST"])
    def osc_rollback(request, raw):
        payload = _json_body(raw)
        record = platform.ontology.rollback(request.path_params["prefix"], int(payload.get("version", 0)))
        return JSONResponse(record.summary())

    @route("/osc/{prefix}/diff", ["GET"])
    def osc_diff(request, raw):
        prefix = request.path_params["prefix"]
        try:
            a = int(request.query_params.get("a", ""))
            b = int(request.query_params.get("b", ""))
        except ValueError:
            raise InvalidParameter("diff requires integer versions ?a=&b=") from None
        added, removed = platform.ontology.diff_versions(prefix, a, b)
        lines = lambda triples: [f"{nt_term(s)} {nt_term(p)} {nt_term(o)} ." for s, p, o in triples]
        return JSONResponse({"prefix": prefix, "a": a, "b": b, "added": lines(added), "removed": lines(removed)})

    @route("/osc/{prefix}/view/{mode}", ["GET"])
    def osc_view(request, raw):
        return JSONResponse(platform.ontology.render_view(
            request.path_params["prefix"], request.path_params["mode"]))

    @route("/osc/{prefix}/status", ["GET"])
    def osc_status(request, raw):
        return JSONResponse(platform.ontology.monitor_status(
            request.path_params["prefix"], check_url=request.query_params.get("check_url")))

    @route("/osc/{prefix}/dump", ["GET"])
    def osc_dump(request, raw):
        format_name = request.query_params.get("format", "ttl")
        data = platform.ontology.dump(request.path_params["prefix"], format_name)
        return Response(data, media_type=MEDIA_TYPES[normalize_format(format_name)])

    # --- OCR ---

    @route("/ocr/recognize", ["POST"])
    def ocr_recognize(request, raw):
        payload = _json_body(raw)
        result = platform.ocr.recognize(
            payload.get("canvas"), RegionSelector.from_dict(payload["region"]),
            payload.get("provider", "stub"), language=payload.get("language"))
        return JSONResponse(result.as_dict(), status_code=201)

    @route("/ocr/proofread", ["POST"])
    def ocr_proofread(request, raw):
        payload = _json_body(raw)
        result = platform.ocr.proofread(
            payload.get("result_id"), payload.get("text", ""), payload.get("editor"))
        return JSONResponse(result.as_dict())

    @route("/ocr/results", ["GET"])
    def ocr_results(request, raw):
        return JSONResponse({"items": [
            r.as_dict() for r in platform.ocr.results(canvas=request.query_params.get("canvas"))]})

    @route("/ocr/corpus", ["GET"])
    def ocr_corpus(request, raw):
        corpus = platform.ocr.export_corpus(
            provider=request.query_params.get("provider"),
            manifest=request.query_params.get("manifest"))
        return PlainTextResponse(corpus, media_type="application/x-ndjson")

    # --- federation ---

    @route("/federation/endpoints", ["GET", "POST"])
    def endpoints_route(request, raw):
        if request.method == "POST":
            payload = _json_body(raw)
            platform.federation.register_endpoint(EndpointConfig(
                name=payload.get("name", ""),
                url=payload.get("url", ""),
                query_template=payload.get("query_template", DEFAULT_LABEL_TEMPLATE),
                timeout=float(payload.get("timeout", 10.0)),
                enabled=bool(payload.get("enabled", True))))
            return JSONResponse({"items": [e.as_dict() for e in platform.federation.endpoints()]}, status_code=201)
        return JSONResponse({"items": [e.as_dict() for e in platform.federation.endpoints()]})

    @route("/federation/lookup", ["GET"])
    def lookup_route(request, raw):
        term = request.query_params.get("term", "")
        if not term:
            raise InvalidParameter("lookup requires ?term=")
        return JSONResponse(platform.federation.federated_lookup(term).as_dict())

    @route("/federation/enrich", ["POST"])
    def enrich_route(request, raw):
        payload = _json_body(raw)
        count = platform.federation.enrich_object(payload.get("object"))
        return JSONResponse({"object": payload.get("object"), "new_quads": count})

    middleware = [
        Middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]),
    ]
    app = Starlette(routes=routes, middleware=middleware)
    app.state.platform = platform
    return app


def serve(config):
    """Run the platform service; fails fast on invalid config."""
    import uvicorn

    from ..platform import Platform

    platform = Platform(config)
    app = build_app(platform)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
