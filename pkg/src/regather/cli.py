"""Command-line interface.

Commands operate directly on the storage directory named by the config
(or --data), so they compose with a stopped service; `serve` runs the
HTTP platform and `fixtures serve` runs the level-0 image server.
Failures print one machine-readable JSON error line on stderr and exit
nonzero.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from .annotations import RegionSelector
from .config import SAMPLE_CONFIG, PlatformConfig
from .errors import RegatherError
from .iiif.serialize import presentation_json
from .platform import Platform
from .service.app import _solution_json, build_app
from .service.fixtures import build_fixture_app
from .vocab import ANNOTATION_GRAPH, COLLECTION_GRAPH, LINKING_GRAPH, MANIFEST_GRAPH

GRAPHS = {
    "collection": COLLECTION_GRAPH,
    "manifest": MANIFEST_GRAPH,
    "annotation": ANNOTATION_GRAPH,
    "linking": LINKING_GRAPH,
}


def _fail(exc):
    click.echo("error: " + json.dumps(exc.as_dict(), ensure_ascii=False), err=True)
    sys.exit(1)


def _platform(ctx):
    try:
        return Platform(ctx.obj["config"])
    except RegatherError as exc:
        _fail(exc)


def _echo_json(data):
    click.echo(json.dumps(data, ensure_ascii=False, indent=2))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Platform config file (TOML).")
@click.option("--data", "data_dir", type=click.Path(file_okay=False), default=None,
              help="Storage directory (overrides the config's storage_root).")
@click.option("--base", "base_uri", default=None, help="Platform base URI override.")
@click.option("--token", "token_env", default=None, help="Env var name holding the bearer token.")
@click.pass_context
def main(ctx, config_path, data_dir, base_uri, token_env):
    """regather: integrate scattered archival image collections without copying pixels."""
    try:
        config = PlatformConfig.from_file(config_path) if config_path else PlatformConfig()
        if data_dir:
            config.storage_root = data_dir
        if base_uri:
            config.platform_base = base_uri
        if token_env:
            config.token_env = token_env
        config.check()
    except RegatherError as exc:
        _fail(exc)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@main.command("init-config")
@click.argument("path", type=click.Path(dir_okay=False))
def init_config(path):
    """Write a sample config file."""
    Path(path).write_text(SAMPLE_CONFIG, encoding="utf-8")
    click.echo(path)


@main.command("import")
@click.argument("uris", nargs=-1, required=True)
@click.pass_context
def import_cmd(ctx, uris):
    """Register remote manifests by URI (one-click, no image copies)."""
    platform = _platform(ctx)
    try:
        records = platform.import_many(list(uris))
    except RegatherError as exc:
        _fail(exc)
    for record in records:
        click.echo(record.local_uri)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def upload(ctx, file):
    """Register a local manifest document."""
    platform = _platform(ctx)
    try:
        record = platform.upload_manifest(Path(file).read_bytes())
    except RegatherError as exc:
        _fail(exc)
    click.echo(record.local_uri)


@main.group()
def compose():
    """Compose new manifests and collections from registered resources."""


@compose.command("manifest")
@click.option("--label", required=True)
@click.option("--member", "-m", "members", multiple=True, required=True, help="Canvas URI (repeatable).")
@click.pass_context
def compose_manifest_cmd(ctx, label, members):
    platform = _platform(ctx)
    try:
        record = platform.compose_manifest(label, list(members))
    except RegatherError as exc:
        _fail(exc)
    click.echo(record.local_uri)


@compose.command("collection")
@click.option("--label", required=True)
@click.option("--member", "-m", "members", multiple=True, required=True, help="Registered URI (repeatable).")
@click.pass_context
def compose_collection_cmd(ctx, label, members):
    platform = _platform(ctx)
    try:
        record = platform.compose_collection(label, list(members))
    except RegatherError as exc:
        _fail(exc)
    click.echo(record.local_uri)


@main.group()
def annotate():
    """Create image/object/semantic layer annotations."""


@annotate.command("image")
@click.option("--target", required=True)
@click.option("--pair", "pairs", multiple=True, required=True, help="predicate=value (repeatable).")
@click.option("--creator", default="cli")
@click.pass_context
def annotate_image(ctx, target, pairs, creator):
    platform = _platform(ctx)
    try:
        metadata = [pair.split("=", 1) for pair in pairs]
        annotation = platform.annotations.annotate_image_layer(target, metadata, creator=creator)
    except RegatherError as exc:
        _fail(exc)
    click.echo(annotation.id)


@annotate.command("object")
@click.option("--canvas", required=True)
@click.option("--region", required=True, help="xywh=x,y,w,h or xywh=percent:x,y,w,h")
@click.option("--object-class", "object_class", required=True)
@click.option("--object-uri", "object_uri", default=None)
@click.option("--pair", "pairs", multiple=True, help="predicate=value (repeatable).")
@click.option("--creator", default="cli")
@click.pass_context
def annotate_object(ctx, canvas, region, object_class, object_uri, pairs, creator):
    platform = _platform(ctx)
    try:
        annotation = platform.annotations.annotate_object_layer(
            canvas,
            RegionSelector.from_fragment(region),
            object_class,
            object_uri=object_uri,
            body=[pair.split("=", 1) for pair in pairs],
            creator=creator,
        )
    except RegatherError as exc:
        _fail(exc)
    click.echo(f"{annotation.id} object={annotation.object_uri}")


@annotate.command("semantic")
@click.option("--subject", required=True)
@click.option("--predicate", required=True)
@click.option("--target", required=True)
@click.option("--creator", default="cli")
@click.pass_context
def annotate_semantic(ctx, subject, predicate, target, creator):
    platform = _platform(ctx)
    try:
        annotation = platform.annotations.annotate_semantic_layer(subject, predicate, target, creator=creator)
    except RegatherError as exc:
        _fail(exc)
    click.echo(annotation.id)


@main.command()
@click.argument("query_text")
@click.pass_context
def query(ctx, query_text):
    """Run a SPARQL query (inline text, or a file path to read it from)."""
    platform = _platform(ctx)
    path = Path(query_text)
    if path.is_file():
        query_text = path.read_text(encoding="utf-8")
    try:
        solution = platform.query(query_text)
    except RegatherError as exc:
        _fail(exc)
    _echo_json(_solution_json(solution))


@main.command()
@click.option("--graph", required=True, help="collection|manifest|annotation|linking or a full graph IRI.")
@click.option("--format", "format_name", default="nt", help="rdfxml|ttl|rdfjson|nt")
@click.pass_context
def dump(ctx, graph, format_name):
    """Serialize one graph to stdout."""
    platform = _platform(ctx)
    try:
        data = platform.dump(GRAPHS.get(graph, graph), format_name)
    except RegatherError as exc:
        _fail(exc)
    sys.stdout.write(data.decode("utf-8"))


@main.command()
@click.option("--graph", required=True)
@click.option("--format", "format_name", default="nt")
@click.argument("file", type=click.Path(exists=True, dir_okay=False), required=False)
@click.pass_context
def load(ctx, graph, format_name, file):
    """Load RDF from a file or stdin into one graph."""
    platform = _platform(ctx)
    data = Path(file).read_bytes() if file else sys.stdin.buffer.read()
    try:
        count = platform.load(data, format_name, GRAPHS.get(graph, graph))
    except RegatherError as exc:
        _fail(exc)
    click.echo(str(count))


@main.command("map-csv")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--subject-column", required=True)
@click.option("--map", "mappings", multiple=True, required=True, help="column=predicateIRI (repeatable).")
@click.option("--graph", default="manifest")
@click.pass_context
def map_csv(ctx, file, subject_column, mappings, graph):
    """Convert tabular metadata (CSV with header row) into quads."""
    platform = _platform(ctx)
    rows = list(csv.DictReader(io.StringIO(Path(file).read_text(encoding="utf-8"))))
    mapping = dict(entry.split("=", 1) for entry in mappings)
    try:
        count = platform.map_tabular_metadata(rows, mapping, subject_column, GRAPHS.get(graph, graph))
    except RegatherError as exc:
        _fail(exc)
    click.echo(str(count))


@main.command()
@click.argument("uri")
@click.pass_context
def provenance(ctx, uri):
    """Print the gene chain of a registered or derived URI."""
    platform = _platform(ctx)
    try:
        chain = platform.trace_gene_chain(uri)
    except RegatherError as exc:
        _fail(exc)
    _echo_json([link.as_dict() for link in chain])


@main.command("list")
@click.option("--kind", default=None)
@click.pass_context
def list_cmd(ctx, kind):
    """List registered resources in registration order."""
    platform = _platform(ctx)
    _echo_json(platform.list_registered(kind=kind))


@main.group()
def osc():
    """Ontology service center."""


@osc.command("publish")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--prefix", required=True)
@click.option("--namespace", required=True)
@click.option("--format", "format_name", default="ttl")
@click.option("--contributor", "contributors", multiple=True)
@click.option("--catalog", default="")
@click.pass_context
def osc_publish(ctx, file, prefix, namespace, format_name, contributors, catalog):
    platform = _platform(ctx)
    try:
        record = platform.ontology.publish_ontology(
            Path(file).read_bytes(), format_name, prefix, namespace,
            contributors=list(contributors), catalog_entry=catalog)
    except RegatherError as exc:
        _fail(exc)
    click.echo(f"{record.prefix} v{record.current_version}")


@osc.command("update")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--prefix", required=True)
@click.option("--format", "format_name", default="ttl")
@click.pass_context
def osc_update(ctx, file, prefix, format_name):
    platform = _platform(ctx)
    try:
        record = platform.ontology.update_ontology(prefix, Path(file).read_bytes(), format_name)
    except RegatherError as exc:
        _fail(exc)
    click.echo(f"{record.prefix} v{record.current_version}")


@osc.command("rollback")
@click.option("--prefix", required=True)
@click.option("--version", required=True, type=int)
@click.pass_context
def osc_rollback(ctx, prefix, version):
    platform = _platform(ctx)
    try:
        record = platform.ontology.rollback(prefix, version)
    except RegatherError as exc:
        _fail(exc)
    click.echo(f"{record.prefix} v{record.current_version}")


@osc.command("diff")
@click.option("--prefix", required=True)
@click.option("-a", required=True, type=int)
@click.option("-b", required=True, type=int)
@click.pass_context
def osc_diff(ctx, prefix, a, b):
    platform = _platform(ctx)
    from .rdf.terms import nt_term
    try:
        added, removed = platform.ontology.diff_versions(prefix, a, b)
    except RegatherError as exc:
        _fail(exc)
    for s, p, o in added:
        click.echo(f"+ {nt_term(s)} {nt_term(p)} {nt_term(o)} .")
    for s, p, o in removed:
        click.echo(f"- {nt_term(s)} {nt_term(p)} {nt_term(o)} .")


@osc.command("search")
@click.argument("term")
@click.option("--kind", default=None)
@click.pass_context
def osc_search(ctx, term, kind):
    platform = _platform(ctx)
    _echo_json(platform.ontology.search_terms(term, kind=kind))


@osc.command("status")
@click.option("--prefix", required=True)
@click.pass_context
def osc_status(ctx, prefix):
    platform = _platform(ctx)
    try:
        _echo_json(platform.ontology.monitor_status(prefix))
    except RegatherError as exc:
        _fail(exc)


@main.group()
def ocr():
    """OCR over canvas regions with manual proofreading."""


@ocr.command("run")
@click.option("--canvas", required=True)
@click.option("--region", required=True, help="xywh=x,y,w,h")
@click.option("--provider", default="stub")
@click.option("--language", default=None)
@click.pass_context
def ocr_run(ctx, canvas, region, provider, language):
    platform = _platform(ctx)
    try:
        result = platform.ocr.recognize(canvas, RegionSelector.from_fragment(region), provider, language=language)
    except RegatherError as exc:
        _fail(exc)
    _echo_json(result.as_dict())


@ocr.command("proofread")
@click.option("--result", "result_id", required=True)
@click.option("--text", required=True)
@click.option("--editor", required=True)
@click.pass_context
def ocr_proofread(ctx, result_id, text, editor):
    platform = _platform(ctx)
    try:
        result = platform.ocr.proofread(result_id, text, editor)
    except RegatherError as exc:
        _fail(exc)
    click.echo(f"{result.id} revision={result.revision}")


@ocr.command("export")
@click.option("--provider", default=None)
@click.option("--manifest", default=None)
@click.pass_context
def ocr_export(ctx, provider, manifest):
    platform = _platform(ctx)
    sys.stdout.write(platform.ocr.export_corpus(provider=provider, manifest=manifest))


@main.command()
@click.argument("uri")
@click.pass_context
def resolve(ctx, uri):
    """Print the Presentation JSON of a registered resource."""
    platform = _platform(ctx)
    try:
        _echo_json(presentation_json(platform.resolve(uri)))
    except RegatherError as exc:
        _fail(exc)


@main.command()
@click.pass_context
def snapshot(ctx):
    """Write a recovery snapshot of the full platform state."""
    platform = _platform(ctx)
    click.echo(str(platform.write_snapshot()))


@main.command()
@click.pass_context
def serve(ctx):
    """Run the HTTP service (fails fast on invalid config)."""
    import uvicorn

    config = ctx.obj["config"]
    try:
        platform = Platform(config)
    except RegatherError as exc:
        _fail(exc)
    app = build_app(platform)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


@main.group()
def fixtures():
    """Desk-scale fixture services."""


@fixtures.command("serve")
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8801, type=int)
def fixtures_serve(root, host, port):
    """Serve pre-generated level-0 image derivatives and fixture manifests."""
    import uvicorn

    uvicorn.run(build_fixture_app(root), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
