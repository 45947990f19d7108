"""Independent reference implementations used to check the real code.

Everything here is written as literally as possible from the rule
definitions — restart-on-change scans, all-pairs breadth-first search,
exhaustive path enumeration — trading speed for obviousness. The test
suite compares the production implementations against these.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from conceptmap.dominate import NormalizedTriple, normalize
from conceptmap.extract import Triple
from conceptmap.graphstore import ConceptGraph

Key = tuple[str, int, int]


# --- pruning ------------------------------------------------------------------


@dataclass(frozen=True)
class _NT:
    """Normalized view of a triple, precomputed for the pairwise scans."""

    key: Key
    ns: str
    nr: str
    no: str

    @staticmethod
    def of(t: Triple) -> "_NT":
        n: NormalizedTriple = normalize(t)
        return _NT(key=n.key, ns=n.norm_subject, nr=n.norm_relation, no=n.norm_object)


def _info(phrase: str) -> tuple[int, int]:
    return (len(phrase.split()), len(phrase))


def _more_informative(a: str, b: str, a_key: Key, b_key: Key) -> bool:
    """True when phrase a beats phrase b (tokens, then chars, then earlier key)."""
    ia, ib = _info(a), _info(b)
    if ia != ib:
        return ia > ib
    return a_key < b_key


def _contains_tokens(haystack: str, needle: str) -> bool:
    hay = haystack.split()
    ned = needle.split()
    if not ned or len(ned) > len(hay):
        return False
    return any(hay[i : i + len(ned)] == ned for i in range(len(hay) - len(ned) + 1))


def _dominates(a: _NT, b: _NT, rule: str) -> bool:
    """Literal reading of one domination rule for an ordered pair (a, b)."""
    if a.key == b.key:
        return False
    if rule == "R1":
        return a.ns == b.ns and a.nr == b.nr and _more_informative(a.no, b.no, a.key, b.key)
    if rule == "R2":
        return a.ns == b.ns and a.no == b.no and _more_informative(a.nr, b.nr, a.key, b.key)
    if rule == "R3":
        return a.nr == b.nr and a.no == b.no and _more_informative(a.ns, b.ns, a.key, b.key)
    if rule == "R4":
        return (
            a.key[0] == b.key[0]
            and a.key[1] == b.key[1]
            and _contains_tokens(a.nr, b.no)
        )
    raise ValueError(f"unknown rule {rule!r}")


def oracle_prune(
    triples: list[Triple], rules: tuple[str, ...] = ("R1", "R2", "R3", "R4")
) -> set[Key]:
    """Surviving provenance keys by restart-on-removal pairwise scanning.

    For each rule in order, scan every ordered pair of surviving triples in
    provenance-key order; on the first dominated pair remove the loser and
    restart that rule's scan. When a full pass over all rules removes
    nothing, the survivors are final.
    """
    norm: list[_NT] = []
    for t in triples:
        try:
            norm.append(_NT.of(t))
        except Exception:
            continue  # empty-normalizing records are discarded up front
    alive: dict[Key, _NT] = {n.key: n for n in sorted(norm, key=lambda n: n.key)}
    changed = True
    while changed:
        changed = False
        for rule in rules:
            removing = True
            while removing:
                removing = False
                items = sorted(alive.values(), key=lambda n: n.key)
                for a in items:
                    if a.key not in alive:
                        continue
                    for b in items:
                        if b.key not in alive or a.key not in alive:
                            continue
                        if _dominates(a, b, rule):
                            del alive[b.key]
                            removing = True
                            changed = True
                            break
                    if removing:
                        break
    return set(alive)


def oracle_prune_partitioned(
    triples: list[Triple], rules: tuple[str, ...] = ("R1", "R2", "R3", "R4")
) -> set[Key]:
    """Same result as oracle_prune, but scanning independent components.

    Two triples can only ever interact when they share a grouping key
    (subject+relation, subject+object, relation+object) or sit in the same
    sentence; connected components under those links are closed under every
    rule, so each component prunes independently. This keeps the literal
    oracle usable on large inputs.
    """
    norm: list[_NT] = []
    for t in triples:
        try:
            norm.append(_NT.of(t))
        except Exception:
            continue
    parent: dict[Key, Key] = {n.key: n.key for n in norm}

    def find(k: Key) -> Key:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(a: Key, b: Key) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    buckets: dict[tuple, list[Key]] = {}
    for n in norm:
        for link in (
            ("sr", n.ns, n.nr),
            ("so", n.ns, n.no),
            ("ro", n.nr, n.no),
            ("sent", n.key[0], n.key[1]),
        ):
            buckets.setdefault(link, []).append(n.key)
    for keys in buckets.values():
        for k in keys[1:]:
            union(keys[0], k)

    by_root: dict[Key, list[Triple]] = {}
    norm_keys = {n.key for n in norm}
    for t in triples:
        try:
            k = normalize(t).key
        except Exception:
            continue
        if k in norm_keys:
            by_root.setdefault(find(k), []).append(t)

    survivors: set[Key] = set()
    for component in by_root.values():
        survivors |= oracle_prune(component, rules)
    return survivors


# --- graph analytics ----------------------------------------------------------


def _adjacency(graph: ConceptGraph, directed: bool) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {n.node_id: [] for n in graph.nodes}
    for e in graph.edges:
        adj[e.source].append((e.target, e.edge_id))
        if not directed:
            adj[e.target].append((e.source, e.edge_id))
    for lst in adj.values():
        lst.sort()
    return adj


def oracle_distances(graph: ConceptGraph, source: int, directed: bool) -> dict[int, int]:
    """Plain breadth-first search distances from source."""
    adj = _adjacency(graph, directed)
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v, _ in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def oracle_all_shortest_paths(
    graph: ConceptGraph, source: int, target: int, directed: bool
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every shortest path as (node id sequence, edge id sequence)."""
    dist = oracle_distances(graph, source, directed)
    if target not in dist:
        return []
    adj = _adjacency(graph, directed)
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def walk(u: int, nodes: list[int], edges: list[int]) -> None:
        if u == target:
            out.append((tuple(nodes), tuple(edges)))
            return
        for v, eid in adj[u]:
            if dist.get(v) == dist[u] + 1 and dist[v] <= dist[target]:
                walk(v, nodes + [v], edges + [eid])

    walk(source, [source], [])
    return out


def oracle_min_shortest_path(
    graph: ConceptGraph, source: int, target: int, directed: bool
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """The canonical shortest path: minimal interleaved (node, edge) tuple."""
    paths = oracle_all_shortest_paths(graph, source, target, directed)
    if not paths:
        return None

    def interleave(p: tuple[tuple[int, ...], tuple[int, ...]]) -> tuple:
        nodes, edges = p
        seq: list[int] = [nodes[0]]
        for eid, nid in zip(edges, nodes[1:]):
            seq.extend((nid, eid))
        return tuple(seq)

    return min(paths, key=interleave)


def oracle_closeness(graph: ConceptGraph, directed: bool) -> dict[int, float]:
    """Closeness centrality scaled by reachable-set size.

    For a node with r reachable peers at total distance S out of n total
    nodes: (r / (n - 1)) * (r / S); isolated or exhausted nodes score 0.
    """
    n = len(graph.nodes)
    scores: dict[int, float] = {}
    for node in graph.nodes:
        dist = oracle_distances(graph, node.node_id, directed)
        reach = {k: v for k, v in dist.items() if k != node.node_id}
        r = len(reach)
        s = sum(reach.values())
        if n <= 1 or r == 0 or s == 0:
            scores[node.node_id] = 0.0
        else:
            scores[node.node_id] = (r / (n - 1)) * (r / s)
    return scores
