"""Concept maps from document collections.

The pipeline extracts (subject, relation, object) triples with entity
typing and pronoun resolution, prunes dominated triples, stores the result
as a property graph, and answers path, centrality, and relation queries
over it, via library calls, a CLI, or an HTTP API.
"""
from .corpus import Corpus, Document, SentenceSpan, ingest_path, split_sentences
from .dominate import NormalizedTriple, PruneReport, normalize, prune
from .extract import (
    Mention,
    ResolutionMap,
    Triple,
    extract_document,
    extract_triples,
    import_triples,
    recognize_entities,
    resolve_coreferences,
)
from .graphstore import (
    ConceptGraph,
    Edge,
    Node,
    build_graph,
    load,
    neighborhood,
    save,
)
from .analytics import (
    PathResult,
    closeness_centrality,
    query_relations,
    shortest_path,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "SentenceSpan",
    "ingest_path",
    "split_sentences",
    "Mention",
    "ResolutionMap",
    "Triple",
    "recognize_entities",
    "resolve_coreferences",
    "extract_triples",
    "extract_document",
    "import_triples",
    "NormalizedTriple",
    "PruneReport",
    "normalize",
    "prune",
    "ConceptGraph",
    "Node",
    "Edge",
    "build_graph",
    "save",
    "load",
    "neighborhood",
    "PathResult",
    "shortest_path",
    "closeness_centrality",
    "query_relations",
    "__version__",
]
