"""Command-line entry points for the whole pipeline.

Each verb maps onto one library operation so scripted runs and the HTTP
service share identical behavior. File formats are the same JSONL and
graph-file formats the service persists.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analytics import closeness_centrality, query_relations, shortest_path, top_nodes
from .config import Config, ConfigError, load_config
from .corpus import CorpusError, ingest_path, load_corpus, save_corpus
from .dominate import RULE_IDS, prune
from .extract import (
    TripleImportError,
    extract_document,
    import_triples,
    write_triples,
)
from .graphstore import (
    GraphBuildError,
    GraphFormatError,
    build_graph,
    load,
    save,
    to_graphml,
    to_json_document,
)
from .lexicon import load_lexicon
from .service import run_pipeline, serve
from .synthgen import demo_corpus, gen_corpus, gen_stress_triples


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_ingest(args) -> int:
    path = Path(args.path)
    fmt = args.format
    if fmt == "auto":
        if path.is_dir():
            fmt = "plain_dir"
        elif path.suffix == ".jsonl":
            fmt = "jsonl"
        else:
            fmt = "plain"
    elif fmt == "plain" and path.is_dir():
        fmt = "plain_dir"
    corpus = ingest_path(path, format=fmt)
    if args.out:
        save_corpus(corpus, args.out)
    print(f"ingested {len(corpus)} documents" + (f" -> {args.out}" if args.out else ""))
    return 0


def cmd_extract(args) -> int:
    corpus = load_corpus(args.corpus)
    lexicon = load_lexicon(args.gazetteers)
    triples = []
    mention_rows = []
    if getattr(args, "import_file", None):
        imported = import_triples(args.import_file)
        triples.extend(imported)
        print(f"imported {len(imported)} triples from {args.import_file}")
    for doc in corpus:
        mentions, _, doc_triples = extract_document(
            doc, window=args.window, lexicon=lexicon
        )
        triples.extend(doc_triples)
        for sent in mentions:
            for m in sent:
                mention_rows.append(
                    {
                        "doc_id": m.doc_id,
                        "sentence_index": m.sentence_index,
                        "start": m.start,
                        "end": m.end,
                        "surface": m.surface,
                        "entity_class": m.entity_class,
                        "pronominal": m.pronominal,
                        "number": m.number,
                    }
                )
    seen: dict[tuple, str] = {}
    for t in triples:
        if t.key in seen:
            raise CorpusError(
                f"duplicate triple key {t.key}: imported file overlaps extracted corpus"
            )
        seen[t.key] = t.doc_id
    write_triples(triples, args.out)
    if args.mentions:
        with open(args.mentions, "w", encoding="utf-8", newline="\n") as fh:
            for row in mention_rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"extracted {len(triples)} triples from {len(corpus)} documents -> {args.out}")
    return 0


def cmd_prune(args) -> int:
    triples = import_triples(args.infile)
    rules = tuple(r.strip().upper() for r in args.rules.split(",")) if args.rules else None
    survivors, report = prune(triples, rules=rules)
    write_triples(survivors, args.out)
    if args.report:
        Path(args.report).write_text(
            json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8"
        )
    counts = report.rule_counts()
    by_rule = ", ".join(f"{r}={counts[r]}" for r in RULE_IDS)
    print(
        f"pruned {report.input_count} -> {report.output_count} triples "
        f"in {report.passes} passes ({by_rule})"
    )
    return 0


def cmd_build(args) -> int:
    corpus = load_corpus(args.corpus)
    triples = import_triples(args.triples)
    graph = build_graph(triples, corpus)
    save(graph, args.out)
    print(f"built graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges -> {args.out}")
    return 0


def cmd_run(args) -> int:
    corpus = load_corpus(args.corpus)
    cfg = load_config(args.config) if args.config else Config()
    if args.store:
        cfg.store_dir = args.store
    run = run_pipeline(corpus, cfg)
    print(json.dumps(run.as_dict(), indent=2))
    return 0 if run.status == "DONE" else 1


def cmd_serve(args) -> int:
    cfg = load_config(args.config) if args.config else load_config()
    if args.host:
        cfg.host = args.host
    if args.port:
        cfg.port = args.port
    if args.store:
        cfg.store_dir = args.store
    serve(cfg, frontend_dir=args.frontend)
    return 0


def cmd_export(args) -> int:
    graph = load(args.graph)
    if args.format == "json":
        text = json.dumps(to_json_document(graph), ensure_ascii=False, indent=2) + "\n"
    else:
        text = to_graphml(graph)
    _write_or_print(text, args.out)
    return 0


def _resolve_node(graph, value: str):
    node = graph.node_by_name(value)
    if node is None and value.isdigit() and int(value) in graph:
        node = graph.node(int(value))
    if node is None:
        raise SystemExit(f"error: unknown node: {value}")
    return node


def cmd_path(args) -> int:
    graph = load(args.graph)
    src = _resolve_node(graph, args.source)
    tgt = _resolve_node(graph, args.target)
    result = shortest_path(graph, src.node_id, tgt.node_id, directed=args.directed)
    if not result:
        print("no path")
        return 1
    names = " -> ".join(graph.node(n).display_name for n in result.nodes)
    print(f"cost {result.total_cost:g}: {names}")
    for eid in result.edges:
        e = graph.edge(eid)
        print(
            f"  {graph.node(e.source).display_name} -[{e.relation_label}]-> "
            f"{graph.node(e.target).display_name}"
        )
    return 0


def cmd_centrality(args) -> int:
    graph = load(args.graph)
    table = closeness_centrality(graph, directed=args.directed)
    for node_id, score in top_nodes(table, args.top):
        print(f"{score:.6f}\t{node_id}\t{graph.node(node_id).display_name}")
    return 0


def cmd_query(args) -> int:
    graph = load(args.graph)
    sub = query_relations(graph, args.text)
    print(f"{len(sub.nodes)} nodes, {len(sub.edges)} edges")
    for e in sub.edges:
        print(
            f"  {sub.node(e.source).display_name} -[{e.relation_label}]-> "
            f"{sub.node(e.target).display_name}"
        )
    return 0


def cmd_gen(args) -> int:
    if args.what == "stress":
        triples = gen_stress_triples(shuffle_seed=8603 if args.seed is None else args.seed)
        write_triples(triples, args.out)
        print(f"wrote {len(triples)} stress triples -> {args.out}")
    elif args.what == "corpus":
        corpus = gen_corpus(n_docs=args.docs, seed=2010 if args.seed is None else args.seed)
        save_corpus(corpus, args.out)
        print(f"wrote {len(corpus)} synthetic documents -> {args.out}")
    else:
        corpus = demo_corpus()
        save_corpus(corpus, args.out)
        print(f"wrote {len(corpus)} demo documents -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptmap",
        description="Concept-map pipeline: extract, prune, build, explore.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load documents into a corpus file")
    p.add_argument("path")
    p.add_argument("--format", choices=("auto", "plain", "jsonl"), default="auto")
    p.add_argument("--out", help="write the corpus as JSONL")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="extract relation triples from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument(
        "--import",
        dest="import_file",
        help="merge triples from an existing JSONL file into the output",
    )
    p.add_argument("--out", required=True)
    p.add_argument("--mentions", help="also write recognized mentions as JSONL")
    p.add_argument("--window", type=int, default=2, help="pronoun antecedent window")
    p.add_argument("--gazetteers", help="directory overriding the bundled name lists")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("prune", help="remove dominated triples")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write the removal report as JSON")
    p.add_argument("--rules", help="comma-separated rule ids, e.g. R1,R2,R4")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("build", help="materialize triples as a graph file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--triples", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("run", help="full pipeline into a store directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--store", help="store directory (default from config)")
    p.add_argument("--config", help="JSON config file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--store", help="store directory override")
    p.add_argument("--frontend", help="directory of static UI assets to mount at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="export a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=("json", "graphml"), default="json")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("path", help="shortest path between two named nodes")
    p.add_argument("--graph", required=True)
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--directed", action="store_true")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("centrality", help="closeness centrality ranking")
    p.add_argument("--graph", required=True)
    p.add_argument("--top", type=int)
    p.add_argument("--directed", action="store_true")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("query", help="filter edges by relation text")
    p.add_argument("--graph", required=True)
    p.add_argument("text")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("gen", help="generate bundled fixtures")
    p.add_argument("what", choices=("stress", "corpus", "demo"))
    p.add_argument("--out", required=True)
    p.add_argument("--docs", type=int, default=1000, help="documents for gen corpus")
    p.add_argument("--seed", type=int, help="override the fixture's default seed")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        CorpusError,
        TripleImportError,
        GraphFormatError,
        GraphBuildError,
        ConfigError,
        ValueError,
        FileNotFoundError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
