"""Read-only graph exploration: shortest paths, closeness, relation search.

All operations treat edges as weight 1. Pathfinding and centrality default
to undirected traversal with a directed mode behind a flag. Results are
deterministic: equal-cost paths resolve to the lexicographically smallest
node-id sequence, and centrality ties rank by node id.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphstore import ConceptGraph, subgraph_from_edges
from .textutil import normalize_phrase, stem_token, words


@dataclass(frozen=True)
class PathResult:
    nodes: tuple[int, ...] = ()
    edges: tuple[int, ...] = ()
    total_cost: float = 0.0

    def __bool__(self) -> bool:
        return bool(self.nodes)


def _step(graph: ConceptGraph, v: int, *, directed: bool, reverse: bool) -> list[tuple[int, int]]:
    if not directed:
        return graph.neighbors(v)
    return graph.in_neighbors(v) if reverse else graph.neighbors(v, directed=True)


def _bfs_distances(
    graph: ConceptGraph, start: int, *, directed: bool = False, reverse: bool = False
) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, _ in _step(graph, v, directed=directed, reverse=reverse):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def shortest_path(
    graph: ConceptGraph, source: int, target: int, directed: bool = False
) -> PathResult:
    """Minimum-hop path; among equal-cost paths the smallest node sequence.

    Unknown endpoints raise; an unreachable target yields the empty result.
    Parallel edges resolve to the lowest edge id at each hop.
    """
    graph.node(source)
    graph.node(target)
    if source == target:
        return PathResult(nodes=(source,), edges=(), total_cost=0.0)
    dist_s = _bfs_distances(graph, source, directed=directed)
    if target not in dist_s:
        return PathResult()
    dist_t = _bfs_distances(graph, target, directed=directed, reverse=True)

    nodes = [source]
    edges: list[int] = []
    v = source
    while v != target:
        # neighbors are sorted, so the first admissible hop is the smallest
        for w, e in _step(graph, v, directed=directed, reverse=False):
            if dist_s.get(w) == dist_s[v] + 1 and dist_t.get(w) == dist_t[v] - 1:
                nodes.append(w)
                edges.append(e)
                v = w
                break
    return PathResult(nodes=tuple(nodes), edges=tuple(edges), total_cost=float(len(edges)))


def closeness_centrality(graph: ConceptGraph, directed: bool = False) -> dict[int, float]:
    """Closeness with component scaling, tolerant of disconnected graphs.

    For node v with r reachable nodes (excluding v) and distance sum S over
    n total nodes: score = (r / (n - 1)) * (r / S), and 0 when r = 0. Scores
    stay in [0, 1] on any graph.
    """
    n = len(graph)
    table: dict[int, float] = {}
    for node in graph.nodes:
        dist = _bfs_distances(graph, node.node_id, directed=directed)
        r = len(dist) - 1
        if r <= 0:
            table[node.node_id] = 0.0
            continue
        s = sum(dist.values())
        table[node.node_id] = (r / (n - 1)) * (r / s)
    return table


def top_nodes(table: dict[int, float], k: int | None = None) -> list[tuple[int, float]]:
    """Centrality entries sorted by descending score, ties by node id."""
    ranked = sorted(table.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked if k is None else ranked[:k]


def query_relations(graph: ConceptGraph, query: str) -> ConceptGraph:
    """Subgraph of edges whose stemmed relation tokens cover the query.

    Every stemmed query token must appear among the edge's relation tokens,
    so "travel" finds "traveled to". Endpoint nodes are always included.
    """
    q = normalize_phrase(query)
    if not q:
        raise ValueError("query is empty after normalization")
    stems = [stem_token(w) for w in words(q)]
    edge_ids = [
        e.edge_id for e in graph.edges if all(s in e.relation_tokens for s in stems)
    ]
    return subgraph_from_edges(graph, edge_ids)
