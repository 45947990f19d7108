"""Property graph built from relation triples, with canonical persistence.

Subjects and objects merge into nodes by normalized name; edges merge by
(source, target, normalized relation) and keep every contributing triple
key as provenance. The on-disk format is line-oriented with a version
header and a trailing checksum, and identical graphs serialize to
byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree as ET

from .corpus import Corpus
from .extract import Triple
from .textutil import normalize_phrase, stem_token, words

logger = logging.getLogger(__name__)

MAGIC = "SPIDERGRAPH"
VERSION = "v1"
HEADER = f"{MAGIC} {VERSION}"

Key = tuple[str, int, int]


class GraphFormatError(ValueError):
    """Unreadable or corrupted graph file."""


class GraphBuildError(ValueError):
    """Build input violates a precondition."""


class UnknownNodeError(KeyError):
    """Lookup of a node id or name that is not in the graph."""


@dataclass(frozen=True)
class Node:
    node_id: int
    canonical_name: str
    display_name: str
    entity_class: str
    locations: frozenset[str]
    mention_count: int


@dataclass(frozen=True)
class Edge:
    edge_id: int
    source: int
    target: int
    relation_label: str
    relation_tokens: tuple[str, ...]
    location: str | None
    provenance: tuple[Key, ...]


@dataclass
class ConceptGraph:
    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    # derived indexes, rebuilt on construction, excluded from equality
    _by_id: dict[int, Node] = field(init=False, repr=False, compare=False)
    _by_name: dict[str, int] = field(init=False, repr=False, compare=False)
    _edge_by_id: dict[int, Edge] = field(init=False, repr=False, compare=False)
    _out: dict[int, list[tuple[int, int]]] = field(init=False, repr=False, compare=False)
    _in: dict[int, list[tuple[int, int]]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.nodes = tuple(sorted(self.nodes, key=lambda n: n.node_id))
        self.edges = tuple(sorted(self.edges, key=lambda e: e.edge_id))
        self._by_id = {n.node_id: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise GraphFormatError("duplicate node ids")
        self._by_name = {n.canonical_name: n.node_id for n in self.nodes}
        if len(self._by_name) != len(self.nodes):
            raise GraphFormatError("duplicate canonical names")
        self._edge_by_id = {e.edge_id: e for e in self.edges}
        if len(self._edge_by_id) != len(self.edges):
            raise GraphFormatError("duplicate edge ids")
        self._out = {n.node_id: [] for n in self.nodes}
        self._in = {n.node_id: [] for n in self.nodes}
        for e in self.edges:
            if e.source not in self._by_id or e.target not in self._by_id:
                raise GraphFormatError(f"edge {e.edge_id} references a missing node")
            if not e.provenance:
                raise GraphFormatError(f"edge {e.edge_id} has empty provenance")
            self._out[e.source].append((e.target, e.edge_id))
            self._in[e.target].append((e.source, e.edge_id))
        for adj in (self._out, self._in):
            for lst in adj.values():
                lst.sort()

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._by_id

    def node(self, node_id: int) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def edge(self, edge_id: int) -> Edge:
        return self._edge_by_id[edge_id]

    def node_by_name(self, name: str) -> Node | None:
        """Resolve a surface or canonical name; None when absent."""
        node_id = self._by_name.get(normalize_phrase(name))
        return None if node_id is None else self._by_id[node_id]

    def neighbors(self, node_id: int, *, directed: bool = False) -> list[tuple[int, int]]:
        """Sorted (neighbor_id, edge_id) pairs; both directions unless directed."""
        if node_id not in self._by_id:
            raise UnknownNodeError(node_id)
        if directed:
            return list(self._out[node_id])
        return sorted(set(self._out[node_id]) | set(self._in[node_id]))

    def in_neighbors(self, node_id: int) -> list[tuple[int, int]]:
        """Sorted (source_id, edge_id) pairs of incoming edges."""
        if node_id not in self._by_id:
            raise UnknownNodeError(node_id)
        return list(self._in[node_id])


# --- build --------------------------------------------------------------------


@dataclass
class _NodeAcc:
    surfaces: list[str] = field(default_factory=list)
    classes: Counter = field(default_factory=Counter)
    locations: set[str] = field(default_factory=set)
    mentions: int = 0


def _majority_class(classes: Counter) -> str:
    best = max(classes.values())
    winners = sorted(c for c, n in classes.items() if n == best)
    non_unknown = [c for c in winners if c != "UNKNOWN"]
    return non_unknown[0] if non_unknown else "UNKNOWN"


def _display(surfaces: list[str]) -> str:
    return sorted(surfaces, key=lambda s: (-len(s), s))[0]


def build_graph(triples: list[Triple], corpus: Corpus) -> ConceptGraph:
    """Materialize triples as a merged property graph.

    Node ids follow canonical-name sort order, so any permutation of the
    same triples builds the identical graph. Triples whose document is not
    in the corpus are rejected; triples with a field that normalizes to
    nothing are skipped with a warning (raw, unpruned input is allowed).
    """
    ordered = sorted(triples, key=lambda t: t.key)
    for t in ordered:
        if corpus.get(t.doc_id) is None:
            raise GraphBuildError(f"triple {t.key} references unknown document {t.doc_id!r}")

    usable: list[tuple[Triple, str, str, str]] = []
    for t in ordered:
        ns, nr, no = normalize_phrase(t.subject), normalize_phrase(t.relation), normalize_phrase(t.object)
        if not ns or not nr or not no:
            logger.warning("skipping triple %s: field normalizes to nothing", t.key)
            continue
        usable.append((t, ns, nr, no))

    accs: dict[str, _NodeAcc] = {}

    def acc(name: str) -> _NodeAcc:
        return accs.setdefault(name, _NodeAcc())

    for t, ns, nr, no in usable:
        sa, oa = acc(ns), acc(no)
        sa.surfaces.append(t.subject.strip())
        sa.classes[t.subject_class] += 1
        sa.mentions += 1
        oa.surfaces.append(t.object.strip())
        oa.classes[t.object_class] += 1
        oa.mentions += 1
        if t.object_class == "LOCATION":
            sa.locations.add(no)
        doc = corpus.get(t.doc_id)
        if doc.report_location:
            sa.locations.add(normalize_phrase(doc.report_location))
            oa.locations.add(normalize_phrase(doc.report_location))

    node_ids = {name: i for i, name in enumerate(sorted(accs))}
    nodes = tuple(
        Node(
            node_id=node_ids[name],
            canonical_name=name,
            display_name=_display(a.surfaces),
            entity_class=_majority_class(a.classes),
            locations=frozenset(a.locations),
            mention_count=a.mentions,
        )
        for name, a in accs.items()
    )

    groups: dict[tuple[int, int, str], dict] = {}
    for t, ns, nr, no in usable:
        gk = (node_ids[ns], node_ids[no], nr)
        g = groups.setdefault(gk, {"surfaces": [], "provenance": []})
        g["surfaces"].append(t.relation.strip())
        g["provenance"].append(t.key)

    node_by_id = {n.node_id: n for n in nodes}
    edges = []
    for edge_id, gk in enumerate(sorted(groups)):
        src_id, tgt_id, nr = gk
        g = groups[gk]
        provenance = tuple(sorted(g["provenance"]))
        shared = node_by_id[src_id].locations & node_by_id[tgt_id].locations
        if len(shared) == 1:
            location = next(iter(shared))
        else:
            doc = corpus.get(provenance[0][0])
            location = normalize_phrase(doc.report_location) if doc.report_location else None
        edges.append(
            Edge(
                edge_id=edge_id,
                source=src_id,
                target=tgt_id,
                relation_label=_display(g["surfaces"]),
                relation_tokens=tuple(stem_token(w) for w in words(nr)),
                location=location or None,
                provenance=provenance,
            )
        )
    return ConceptGraph(nodes=nodes, edges=tuple(edges))


# --- persistence ---------------------------------------------------------------


def _node_record(n: Node) -> dict:
    return {
        "id": n.node_id,
        "canonical": n.canonical_name,
        "display": n.display_name,
        "class": n.entity_class,
        "locations": sorted(n.locations),
        "mentions": n.mention_count,
    }


def _edge_record(e: Edge) -> dict:
    return {
        "id": e.edge_id,
        "source": e.source,
        "target": e.target,
        "label": e.relation_label,
        "tokens": list(e.relation_tokens),
        "location": e.location,
        "provenance": [list(k) for k in e.provenance],
    }


def _dumps(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def save(graph: ConceptGraph, path: str | Path) -> None:
    """Write the canonical file: header, N records, E records, checksum."""
    lines = [HEADER]
    lines.extend("N\t" + _dumps(_node_record(n)) for n in graph.nodes)
    lines.extend("E\t" + _dumps(_edge_record(e)) for e in graph.edges)
    body = "".join(line + "\n" for line in lines).encode("utf-8")
    digest = hashlib.sha256(body).hexdigest()
    Path(path).write_bytes(body + f"#sha256={digest}\n".encode("utf-8"))


def load(path: str | Path) -> ConceptGraph:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"not a UTF-8 graph file: {e}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphFormatError("empty file")
    if lines[0] != HEADER:
        if lines[0].startswith(MAGIC):
            raise GraphFormatError(f"unsupported version: {lines[0]!r}")
        raise GraphFormatError("missing graph header")
    if not lines[-1].startswith("#sha256="):
        raise GraphFormatError("truncated file: checksum line missing")
    stated = lines[-1][len("#sha256="):]
    body = text[: text.rindex("#sha256=")].encode("utf-8")
    if hashlib.sha256(body).hexdigest() != stated:
        raise GraphFormatError("checksum mismatch")

    nodes: list[Node] = []
    edges: list[Edge] = []
    seen_edge = False
    for lineno, line in enumerate(lines[1:-1], 2):
        try:
            tag, payload = line.split("\t", 1)
            rec = json.loads(payload)
        except (ValueError, json.JSONDecodeError) as e:
            raise GraphFormatError(f"line {lineno}: unreadable record: {e}") from None
        if tag == "N":
            if seen_edge:
                raise GraphFormatError(f"line {lineno}: node record after edge records")
            nodes.append(
                Node(
                    node_id=int(rec["id"]),
                    canonical_name=rec["canonical"],
                    display_name=rec["display"],
                    entity_class=rec["class"],
                    locations=frozenset(rec["locations"]),
                    mention_count=int(rec["mentions"]),
                )
            )
        elif tag == "E":
            seen_edge = True
            edges.append(
                Edge(
                    edge_id=int(rec["id"]),
                    source=int(rec["source"]),
                    target=int(rec["target"]),
                    relation_label=rec["label"],
                    relation_tokens=tuple(rec["tokens"]),
                    location=rec["location"],
                    provenance=tuple((k[0], int(k[1]), int(k[2])) for k in rec["provenance"]),
                )
            )
        else:
            raise GraphFormatError(f"line {lineno}: unknown record tag {tag!r}")
    try:
        return ConceptGraph(nodes=tuple(nodes), edges=tuple(edges))
    except GraphFormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFormatError(f"invalid graph structure: {e}") from None


# --- queries --------------------------------------------------------------------


def neighborhood(graph: ConceptGraph, node_id: int, radius: int) -> ConceptGraph:
    """Induced subgraph of nodes within undirected hop distance <= radius."""
    if node_id not in graph:
        raise UnknownNodeError(node_id)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    dist = {node_id: 0}
    frontier = deque([node_id])
    while frontier:
        v = frontier.popleft()
        if dist[v] == radius:
            continue
        for w, _ in graph.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                frontier.append(w)
    keep = set(dist)
    nodes = tuple(n for n in graph.nodes if n.node_id in keep)
    edges = tuple(e for e in graph.edges if e.source in keep and e.target in keep)
    return ConceptGraph(nodes=nodes, edges=edges)


def subgraph_from_edges(graph: ConceptGraph, edge_ids: list[int]) -> ConceptGraph:
    """Subgraph of the given edges plus their endpoint nodes."""
    keep_edges = tuple(graph.edge(i) for i in sorted(set(edge_ids)))
    keep_nodes = {e.source for e in keep_edges} | {e.target for e in keep_edges}
    return ConceptGraph(
        nodes=tuple(n for n in graph.nodes if n.node_id in keep_nodes),
        edges=keep_edges,
    )


# --- export ----------------------------------------------------------------------


def to_json_document(graph: ConceptGraph) -> dict:
    """Plain nodes/edges document for the web UI and generic tooling."""
    return {
        "nodes": [_node_record(n) for n in graph.nodes],
        "edges": [_edge_record(e) for e in graph.edges],
    }


def to_graphml(graph: ConceptGraph) -> str:
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    for key_id, target, name, kind in (
        ("d0", "node", "display", "string"),
        ("d1", "node", "class", "string"),
        ("d2", "edge", "label", "string"),
        ("d3", "edge", "location", "string"),
    ):
        ET.SubElement(
            root, "key", id=key_id, attrib={"for": target},
            **{"attr.name": name, "attr.type": kind},
        )
    g = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    for n in graph.nodes:
        el = ET.SubElement(g, "node", id=f"n{n.node_id}")
        ET.SubElement(el, "data", key="d0").text = n.display_name
        ET.SubElement(el, "data", key="d1").text = n.entity_class
    for e in graph.edges:
        el = ET.SubElement(
            g, "edge", id=f"e{e.edge_id}", source=f"n{e.source}", target=f"n{e.target}"
        )
        ET.SubElement(el, "data", key="d2").text = e.relation_label
        if e.location:
            ET.SubElement(el, "data", key="d3").text = e.location
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
