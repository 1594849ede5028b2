"""Platform configuration: one declarative TOML file, dataclasses inside."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import toml

from .errors import ConfigInvalid
from .federation import EndpointConfig
from .iiif.model import is_absolute_uri


@dataclass
class FetchLimits:
    timeout: float = 30.0
    retries: int = 3
    max_parallel: int = 4


@dataclass
class PlatformConfig:
    platform_base: str = "http://127.0.0.1:8400"
    host: str = "127.0.0.1"
    port: int = 8400
    storage_root: str = "./regather-data"
    token_env: str | None = None  # env var holding the bearer token for mutations
    snapshot_every: int = 500  # events between automatic snapshots; 0 disables
    fetch: FetchLimits = field(default_factory=FetchLimits)
    endpoints: list = field(default_factory=list)  # EndpointConfig
    providers: dict = field(default_factory=dict)  # provider id -> settings dict
    fixtures_root: str | None = None

    @property
    def token(self):
        if not self.token_env:
            return None
        return os.environ.get(self.token_env)

    @property
    def journal_path(self):
        return Path(self.storage_root) / "journal.ndjson"

    @property
    def snapshot_dir(self):
        return Path(self.storage_root) / "snapshots"

    @property
    def archive_dir(self):
        return Path(self.storage_root) / "archives"

    def check(self):
        if not is_absolute_uri(self.platform_base) or "://" not in self.platform_base:
            raise ConfigInvalid(f"platform_base must be an absolute URI, got {self.platform_base!r}")
        if self.platform_base.endswith("/"):
            raise ConfigInvalid("platform_base must not end with a slash")
        if not (1 <= self.port <= 65535):
            raise ConfigInvalid(f"port must be in [1, 65535], got {self.port}")
        if self.fetch.timeout <= 0 or self.fetch.retries < 1:
            raise ConfigInvalid("fetch timeout must be positive and retries at least 1")
        names = [e.name for e in self.endpoints]
        if len(names) != len(set(names)):
            raise ConfigInvalid("endpoint names must be unique")
        for endpoint in self.endpoints:
            if endpoint.timeout <= 0:
                raise ConfigInvalid(f"endpoint {endpoint.name!r} timeout must be positive")
        try:
            Path(self.storage_root).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigInvalid(f"storage root {self.storage_root!r} is not creatable: {exc}") from exc
        return self

    @classmethod
    def from_dict(cls, data):
        fetch = FetchLimits(**data.get("fetch", {}))
        endpoints = [EndpointConfig(**entry) for entry in data.get("endpoints", [])]
        known = {
            "platform_base", "host", "port", "storage_root", "token_env",
            "snapshot_every", "fixtures_root",
        }
        scalars = {key: value for key, value in data.items() if key in known}
        return cls(
            fetch=fetch,
            endpoints=endpoints,
            providers=data.get("providers", {}),
            **scalars,
        ).check()

    @classmethod
    def from_file(cls, path):
        try:
            data = toml.load(path)
        except (OSError, toml.TomlDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {path!r}: {exc}") from exc
        return cls.from_dict(data)


SAMPLE_CONFIG = """\
platform_base = "http://127.0.0.1:8400"
host = "127.0.0.1"
port = 8400
storage_root = "./regather-data"
# token_env = "REGATHER_TOKEN"    # bearer token env var gating mutating routes
snapshot_every = 500

[fetch]
timeout = 30.0
retries = 3
max_parallel = 4

[providers.stub]
# table = { "https://example.org/canvas/1" = "recognized text" }

# Live endpoints are configuration, never a test dependency:
# [[endpoints]]
# name = "wikidata"
# url = "https://query.wikidata.org/sparql"
# timeout = 20.0
# enabled = false
#
# [[endpoints]]
# name = "dbpedia"
# url = "https://dbpedia.org/sparql"
# timeout = 20.0
# enabled = false
#
# [[endpoints]]
# name = "cbdb"
# url = "https://input.cbdb.fas.harvard.edu/sparql"
# timeout = 20.0
# enabled = false
"""
