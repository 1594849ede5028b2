"""Graph names and the platform vocabulary namespace.

The four storage graphs partition everything the platform knows: imported
and composed collections, manifest descriptions, annotation content, and
links into external datasets. Ontologies get one graph per prefix.
"""

COLLECTION_GRAPH = "urn:regather:graph:collection"
MANIFEST_GRAPH = "urn:regather:graph:manifest"
ANNOTATION_GRAPH = "urn:regather:graph:annotation"
LINKING_GRAPH = "urn:regather:graph:linking"

CORE_GRAPHS = (COLLECTION_GRAPH, MANIFEST_GRAPH, ANNOTATION_GRAPH, LINKING_GRAPH)

ONTOLOGY_GRAPH_BASE = "urn:regather:graph:ontology:"

VOCAB = "urn:regather:vocab:"


def ontology_graph(prefix):
    return ONTOLOGY_GRAPH_BASE + prefix
