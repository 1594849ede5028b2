"""regather: zero-copy integration of scattered archival image collections.

Registers remote IIIF manifests by reference, recomposes them into new
manifests and collections with full provenance, layers RDF annotations
over image content, and answers local and federated semantic queries.
"""

__version__ = "0.1.0"
