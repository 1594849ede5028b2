import json

import pytest
from click.testing import CliRunner

from regather.cli import main
from regather.fixture_data import ontology_version


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, data_dir, *args, **kwargs):
    return runner.invoke(main, ["--data", str(data_dir), *args], **kwargs)


def test_import_then_compose_collection_prints_uri(runner, tmp_path, fixture_corpus):
    data = tmp_path / "d"
    urls = [fixture_corpus["manifests"][n] for n in fixture_corpus["institutions"]]
    result = _invoke(runner, data, "import", *urls)
    assert result.exit_code == 0, result.output
    locals_ = result.output.split()
    assert len(locals_) == 4
    composed = _invoke(runner, data, "compose", "collection", "--label", "Classics",
                       *[arg for uri in locals_ for arg in ("-m", uri)])
    assert composed.exit_code == 0, composed.output
    assert composed.output.strip().startswith("http://127.0.0.1:8400/iiif/collection/")
    listing = _invoke(runner, data, "list")
    assert len(json.loads(listing.output)) == 5


def test_query_parse_error_nonzero_with_position(runner, tmp_path):
    result = _invoke(runner, tmp_path / "d", "query", "SELECT ?s WHERE { ?s ?p }")
    assert result.exit_code == 1
    payload = json.loads(result.output.split("error: ", 1)[1])
    assert payload["error"] == "parse_error"
    assert "line" in payload


def test_dump_load_round_trip_via_cli(runner, tmp_path, fixture_corpus):
    source = tmp_path / "a"
    _invoke(runner, source, "import", fixture_corpus["manifests"]["keio"])
    dumped = _invoke(runner, source, "dump", "--graph", "manifest", "--format", "nt")
    assert dumped.exit_code == 0
    nt = dumped.output
    assert nt.strip()

    fresh = tmp_path / "b"
    loaded = _invoke(runner, fresh, "load", "--graph", "manifest", "--format", "nt", input=nt)
    assert loaded.exit_code == 0
    assert int(loaded.output.strip()) == len(nt.strip().splitlines())
    re_dumped = _invoke(runner, fresh, "dump", "--graph", "manifest", "--format", "nt")
    assert sorted(re_dumped.output.splitlines()) == sorted(nt.splitlines())


def test_unknown_subcommand_usage_exit_2(runner, tmp_path):
    result = _invoke(runner, tmp_path / "d", "frobnicate")
    assert result.exit_code == 2
    assert "Usage" in result.stderr or "Usage" in result.output


def test_osc_lifecycle_via_cli(runner, tmp_path):
    data = tmp_path / "d"
    v1 = tmp_path / "v1.ttl"
    v1.write_text(ontology_version(1), encoding="utf-8")
    v2 = tmp_path / "v2.ttl"
    v2.write_text(ontology_version(2), encoding="utf-8")
    ns = "https://vocab.fixture.example/archive#"

    published = _invoke(runner, data, "osc", "publish", str(v1), "--prefix", "arch", "--namespace", ns)
    assert published.exit_code == 0 and published.output.strip() == "arch v1"
    updated = _invoke(runner, data, "osc", "update", str(v2), "--prefix", "arch")
    assert updated.output.strip() == "arch v2"
    diff = _invoke(runner, data, "osc", "diff", "--prefix", "arch", "-a", "1", "-b", "2")
    assert diff.exit_code == 0
    assert all(line.startswith("+") for line in diff.output.strip().splitlines())
    rolled = _invoke(runner, data, "osc", "rollback", "--prefix", "arch", "--version", "1")
    assert rolled.output.strip() == "arch v3"
    found = _invoke(runner, data, "osc", "search", "Seal")
    assert json.loads(found.output)


def test_map_csv(runner, tmp_path):
    csv_file = tmp_path / "meta.csv"
    csv_file.write_text("id,title,year\nitem-1,Seals,1650\nitem-2,Scrolls,\n", encoding="utf-8")
    result = _invoke(runner, tmp_path / "d", "map-csv", str(csv_file),
                     "--subject-column", "id", "--map", "title=urn:meta:title", "--map", "year=urn:meta:year")
    assert result.exit_code == 0
    assert result.output.strip() == "3"


def test_upload_and_resolve(runner, tmp_path):
    doc = {"id": "https://local.example/m", "type": "Manifest", "label": {"en": ["Mine"]}, "items": []}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    uploaded = _invoke(runner, tmp_path / "d", "upload", str(path))
    assert uploaded.exit_code == 0
    resolved = _invoke(runner, tmp_path / "d", "resolve", uploaded.output.strip())
    assert json.loads(resolved.output)["type"] == "Manifest"


def test_init_config_writes_sample(runner, tmp_path):
    target = tmp_path / "regather.toml"
    result = runner.invoke(main, ["init-config", str(target)])
    assert result.exit_code == 0
    assert "platform_base" in target.read_text()


def test_serve_fails_fast_on_invalid_config(runner, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('platform_base = "not-a-uri"\nstorage_root = "%s"\n' % (tmp_path / "d"), encoding="utf-8")
    result = runner.invoke(main, ["--config", str(bad), "serve"])
    assert result.exit_code == 1
    assert "config_invalid" in result.output
