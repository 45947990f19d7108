"""Tests for graph construction, the on-disk format and graph queries."""
from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from conceptmap.corpus import Corpus, Document
from conceptmap.extract import Triple
from conceptmap.graphstore import (
    HEADER,
    ConceptGraph,
    Edge,
    GraphBuildError,
    GraphFormatError,
    Node,
    UnknownNodeError,
    build_graph,
    load,
    neighborhood,
    save,
    subgraph_from_edges,
    to_graphml,
    to_json_document,
)


def corpus(*docs: Document) -> Corpus:
    if not docs:
        docs = (
            Document(doc_id="d1", title="t", body="x", report_location="Baghdad"),
            Document(doc_id="d2", title="t", body="x"),
        )
    return Corpus(documents=docs)


def t(subject, relation, obj, doc="d1", sent=0, idx=0, scls="UNKNOWN", ocls="UNKNOWN"):
    return Triple(
        subject=subject, relation=relation, object=obj,
        doc_id=doc, sentence_index=sent, triple_index=idx,
        subject_class=scls, object_class=ocls,
    )


class TestBuildNodes:
    def test_merge_by_normalized_surface(self):
        g = build_graph(
            [
                t("The men", "spoke to", "their leader", idx=0),
                t("the men", "met", "John", idx=1),
                t("Men", "entered", "the bunker", idx=2),
            ],
            corpus(),
        )
        men = g.node_by_name("the men")
        assert men is not None
        assert men.canonical_name == "men"
        assert men.mention_count == 3

    def test_display_name_longest_then_lexicographic(self):
        g = build_graph(
            [
                t("the men", "met", "John", idx=0),
                t("The men", "met", "Sara", idx=1),
                t("THE MEN", "met", "Mary", idx=2),
            ],
            corpus(),
        )
        # all length 7: lexicographically smallest wins
        assert g.node_by_name("men").display_name == "THE MEN"

    def test_majority_class_unknown_loses_ties(self):
        g = build_graph(
            [
                t("John", "met", "Mary", idx=0, scls="PERSON"),
                t("John", "met", "Sara", idx=1, scls="UNKNOWN"),
            ],
            corpus(),
        )
        assert g.node_by_name("John").entity_class == "PERSON"

    def test_majority_class_lexicographic_between_real_classes(self):
        g = build_graph(
            [
                t("Delta", "met", "Mary", idx=0, scls="ORGANIZATION"),
                t("Delta", "met", "Sara", idx=1, scls="LOCATION"),
            ],
            corpus(),
        )
        assert g.node_by_name("Delta").entity_class == "LOCATION"

    def test_node_ids_follow_canonical_sort(self):
        g = build_graph(
            [t("Zeta", "met", "Alpha", idx=0)],
            corpus(),
        )
        names = [n.canonical_name for n in g.nodes]
        assert names == sorted(names)
        assert [n.node_id for n in g.nodes] == [0, 1]

    def test_location_from_location_class_object(self):
        g = build_graph(
            [t("John", "traveled to", "eastern Baghdad", ocls="LOCATION", doc="d2")],
            corpus(),
        )
        assert g.node_by_name("John").locations == frozenset({"eastern baghdad"})

    def test_report_location_added_to_both_endpoints(self):
        g = build_graph([t("John", "met", "Mary")], corpus())
        assert g.node_by_name("John").locations == frozenset({"baghdad"})
        assert g.node_by_name("Mary").locations == frozenset({"baghdad"})

    def test_unknown_document_rejected(self):
        with pytest.raises(GraphBuildError, match="unknown document"):
            build_graph([t("John", "met", "Mary", doc="ghost")], corpus())

    def test_empty_normalizing_triple_skipped(self, caplog):
        with caplog.at_level("WARNING", logger="conceptmap.graphstore"):
            g = build_graph(
                [t("the", "met", "Mary", idx=0), t("John", "met", "Mary", idx=1)],
                corpus(),
            )
        assert len(g.nodes) == 2
        assert any("normalizes to nothing" in r.message for r in caplog.records)


class TestBuildEdges:
    def test_parallel_triples_merge_into_one_edge(self):
        g = build_graph(
            [
                t("John", "spoke to", "Mary", sent=0, idx=0),
                t("John", "SPOKE TO", "Mary", sent=1, idx=0),
            ],
            corpus(),
        )
        assert len(g.edges) == 1
        e = g.edges[0]
        assert e.provenance == (("d1", 0, 0), ("d1", 1, 0))

    def test_label_is_longest_surface(self):
        g = build_graph(
            [
                t("John", "spoke to", "Mary", sent=0, idx=0),
                t("John", "spoke   to", "Mary", sent=1, idx=0),
            ],
            corpus(),
        )
        assert g.edges[0].relation_label == "spoke   to"

    def test_relation_tokens_stemmed(self):
        g = build_graph([t("John", "traveled to", "Baghdad")], corpus())
        assert g.edges[0].relation_tokens == ("travel", "to")

    def test_different_relations_stay_separate(self):
        g = build_graph(
            [
                t("John", "met", "Mary", idx=0),
                t("John", "saw", "Mary", idx=1),
            ],
            corpus(),
        )
        assert len(g.edges) == 2

    def test_direction_matters(self):
        g = build_graph(
            [
                t("John", "met", "Mary", idx=0),
                t("Mary", "met", "John", idx=1),
            ],
            corpus(),
        )
        assert len(g.edges) == 2

    def test_edge_ids_in_group_key_order(self):
        g = build_graph(
            [
                t("Zeta", "met", "Alpha", idx=0),
                t("Alpha", "met", "Zeta", idx=1),
            ],
            corpus(),
        )
        assert [e.edge_id for e in g.edges] == [0, 1]
        assert g.edges[0].source < g.edges[1].source

    def test_edge_location_single_shared(self):
        g = build_graph(
            [t("John", "traveled to", "eastern Baghdad", doc="d2", ocls="LOCATION")],
            corpus(),
        )
        # subject gained {eastern baghdad}; object has none; no shared ->
        # fall back to report_location of earliest provenance doc (d2: none)
        assert g.edges[0].location is None

    def test_edge_location_fallback_to_report_location(self):
        g = build_graph([t("John", "met", "Mary", doc="d1")], corpus())
        # both endpoints carry {baghdad}: exactly one shared location
        assert g.edges[0].location == "baghdad"

    def test_edge_location_none_when_nothing_known(self):
        g = build_graph([t("John", "met", "Mary", doc="d2")], corpus())
        assert g.edges[0].location is None

    def test_build_is_permutation_invariant(self):
        triples = [
            t("John", "met", "Mary", sent=0, idx=0),
            t("Mary", "spoke to", "the group", sent=1, idx=0),
            t("the group", "entered", "the bunker", sent=2, idx=0),
        ]
        g1 = build_graph(triples, corpus())
        g2 = build_graph(list(reversed(triples)), corpus())
        assert g1 == g2


class TestGraphValidation:
    def n(self, nid, name):
        return Node(node_id=nid, canonical_name=name, display_name=name,
                    entity_class="UNKNOWN", locations=frozenset(), mention_count=1)

    def e(self, eid, src, tgt):
        return Edge(edge_id=eid, source=src, target=tgt, relation_label="met",
                    relation_tokens=("met",), location=None,
                    provenance=(("d1", 0, 0),))

    def test_duplicate_node_ids(self):
        with pytest.raises(GraphFormatError, match="duplicate node ids"):
            ConceptGraph(nodes=(self.n(0, "a"), self.n(0, "b")))

    def test_duplicate_canonical_names(self):
        with pytest.raises(GraphFormatError, match="canonical"):
            ConceptGraph(nodes=(self.n(0, "a"), self.n(1, "a")))

    def test_edge_with_missing_endpoint(self):
        with pytest.raises(GraphFormatError, match="missing node"):
            ConceptGraph(nodes=(self.n(0, "a"),), edges=(self.e(0, 0, 9),))

    def test_edge_with_empty_provenance(self):
        bad = Edge(edge_id=0, source=0, target=1, relation_label="met",
                   relation_tokens=("met",), location=None, provenance=())
        with pytest.raises(GraphFormatError, match="provenance"):
            ConceptGraph(nodes=(self.n(0, "a"), self.n(1, "b")), edges=(bad,))

    def test_unknown_node_lookup(self):
        g = ConceptGraph(nodes=(self.n(0, "a"),))
        with pytest.raises(UnknownNodeError):
            g.node(5)
        assert g.node_by_name("zzz") is None

    def test_neighbors_sorted_both_directions(self):
        g = ConceptGraph(
            nodes=(self.n(0, "a"), self.n(1, "b"), self.n(2, "c")),
            edges=(self.e(0, 1, 0), self.e(1, 1, 2)),
        )
        assert g.neighbors(1) == [(0, 0), (2, 1)]
        assert g.neighbors(1, directed=True) == [(0, 0), (2, 1)]
        assert g.neighbors(0) == [(1, 0)]
        assert g.neighbors(0, directed=True) == []
        assert g.in_neighbors(0) == [(1, 0)]


def demo_graph() -> ConceptGraph:
    triples = [
        t("John", "traveled to", "eastern Baghdad", sent=0, idx=0,
          scls="PERSON", ocls="LOCATION"),
        t("John", "spoke to", "the leader", sent=1, idx=0, scls="PERSON"),
        t("the leader", "entered", "the bunker", sent=2, idx=0),
    ]
    return build_graph(triples, corpus())


class TestPersistence:
    def test_roundtrip_equality(self, tmp_path):
        g = demo_graph()
        p = tmp_path / "g.spg"
        save(g, p)
        assert load(p) == g

    def test_file_layout(self, tmp_path):
        g = demo_graph()
        p = tmp_path / "g.spg"
        save(g, p)
        lines = p.read_text(encoding="utf-8").splitlines()
        assert lines[0] == HEADER == "SPIDERGRAPH v1"
        tags = [l.split("\t", 1)[0] for l in lines[1:-1]]
        assert tags == ["N"] * len(g.nodes) + ["E"] * len(g.edges)
        assert lines[-1].startswith("#sha256=")

    def test_save_byte_identical(self, tmp_path):
        g = demo_graph()
        p1, p2 = tmp_path / "1.spg", tmp_path / "2.spg"
        save(g, p1)
        save(g, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_checksum_mismatch_detected(self, tmp_path):
        p = tmp_path / "g.spg"
        save(demo_graph(), p)
        data = p.read_bytes().replace(b"John", b"Jahn", 1)
        p.write_bytes(data)
        with pytest.raises(GraphFormatError, match="checksum"):
            load(p)

    def test_missing_checksum_line(self, tmp_path):
        p = tmp_path / "g.spg"
        save(demo_graph(), p)
        lines = p.read_text(encoding="utf-8").splitlines()
        p.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        with pytest.raises(GraphFormatError, match="truncated"):
            load(p)

    def test_missing_header(self, tmp_path):
        p = tmp_path / "g.spg"
        p.write_text("not a graph\n", encoding="utf-8")
        with pytest.raises(GraphFormatError, match="header"):
            load(p)

    def test_unsupported_version(self, tmp_path):
        p = tmp_path / "g.spg"
        p.write_text("SPIDERGRAPH v9\n#sha256=00\n", encoding="utf-8")
        with pytest.raises(GraphFormatError, match="version"):
            load(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "g.spg"
        p.write_bytes(b"")
        with pytest.raises(GraphFormatError):
            load(p)

    def test_node_after_edge_rejected(self, tmp_path):
        import hashlib
        node = '{"id":0,"canonical":"a","display":"a","class":"UNKNOWN","locations":[],"mentions":1}'
        node2 = '{"id":1,"canonical":"b","display":"b","class":"UNKNOWN","locations":[],"mentions":1}'
        edge = '{"id":0,"source":0,"target":1,"label":"met","tokens":["met"],"location":null,"provenance":[["d",0,0]]}'
        body = "SPIDERGRAPH v1\n" + "N\t" + node + "\n" + "E\t" + edge + "\n" + "N\t" + node2 + "\n"
        digest = hashlib.sha256(body.encode()).hexdigest()
        p = tmp_path / "g.spg"
        p.write_text(body + f"#sha256={digest}\n", encoding="utf-8")
        with pytest.raises(GraphFormatError, match="after edge"):
            load(p)

    def test_garbage_record_rejected(self, tmp_path):
        import hashlib
        body = "SPIDERGRAPH v1\nN\tnot json\n"
        digest = hashlib.sha256(body.encode()).hexdigest()
        p = tmp_path / "g.spg"
        p.write_text(body + f"#sha256={digest}\n", encoding="utf-8")
        with pytest.raises(GraphFormatError, match="unreadable"):
            load(p)

    def test_non_utf8_rejected(self, tmp_path):
        p = tmp_path / "g.spg"
        p.write_bytes(b"SPIDERGRAPH v1\n\xff\xfe\n")
        with pytest.raises(GraphFormatError, match="UTF-8"):
            load(p)


class TestQueries:
    def test_neighborhood_radius(self):
        g = demo_graph()
        john = g.node_by_name("John").node_id
        r0 = neighborhood(g, john, 0)
        assert [n.canonical_name for n in r0.nodes] == ["john"]
        assert r0.edges == ()
        r1 = neighborhood(g, john, 1)
        assert {n.canonical_name for n in r1.nodes} == {"john", "eastern baghdad", "leader"}
        assert len(r1.edges) == 2
        r2 = neighborhood(g, john, 2)
        assert len(r2.nodes) == 4 and len(r2.edges) == 3

    def test_neighborhood_unknown_node(self):
        with pytest.raises(UnknownNodeError):
            neighborhood(demo_graph(), 99, 1)

    def test_neighborhood_negative_radius(self):
        g = demo_graph()
        with pytest.raises(ValueError):
            neighborhood(g, 0, -1)

    def test_subgraph_from_edges(self):
        g = demo_graph()
        sub = subgraph_from_edges(g, [g.edges[0].edge_id])
        assert len(sub.edges) == 1
        assert {n.node_id for n in sub.nodes} == {g.edges[0].source, g.edges[0].target}


class TestExport:
    def test_json_document_shape(self):
        doc = to_json_document(demo_graph())
        assert {n["canonical"] for n in doc["nodes"]} == {
            "john", "eastern baghdad", "leader", "bunker",
        }
        assert all(set(e) >= {"id", "source", "target", "label"} for e in doc["edges"])

    def test_graphml_parses(self):
        g = demo_graph()
        xml = to_graphml(g)
        root = ET.fromstring(xml)
        ns = "{http://graphml.graphdrawing.org/xmlns}"
        nodes = root.findall(f".//{ns}node")
        edges = root.findall(f".//{ns}edge")
        assert len(nodes) == len(g.nodes)
        assert len(edges) == len(g.edges)
