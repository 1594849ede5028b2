from .app import build_app, serve
from .fixtures import build_fixture_app, serve_fixture_images

__all__ = ["build_app", "build_fixture_app", "serve", "serve_fixture_images"]
