"""Pipeline orchestration and the HTTP API.

A run executes corpus -> extraction -> pruning -> graph build -> persist.
Artifacts are staged in a scratch directory and moved into the store only
when every stage succeeds, so a failed run leaves the previous snapshot
untouched. The API serves reads from an immutable in-memory graph that is
swapped atomically when a run completes; one run executes at a time and
concurrent run requests are rejected as busy.
"""
from __future__ import annotations

import json
import logging
import shutil
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .analytics import closeness_centrality, query_relations, shortest_path, top_nodes
from .config import Config
from .corpus import Corpus, CorpusError, Document, load_corpus, save_corpus, split_sentences
from .dominate import prune
from .extract import (
    Triple,
    extract_triples,
    import_triples,
    recognize_entities,
    resolve_coreferences,
    write_triples,
)
from .graphstore import ConceptGraph, build_graph, load, save, to_json_document
from .lexicon import load_lexicon

logger = logging.getLogger(__name__)

VERSION = "0.1.0"

GRAPH_FILE = "graph.spg"
RAW_TRIPLES_FILE = "triples_raw.jsonl"
PRUNED_TRIPLES_FILE = "triples_pruned.jsonl"
CORPUS_FILE = "corpus.jsonl"
SENTENCES_FILE = "sentences.jsonl"
MENTIONS_FILE = "mentions.jsonl"
REPORT_FILE = "prune_report.json"
RUNS_DIR = "runs"

_STAGES = ("extract", "prune", "build", "persist")


@dataclass
class PipelineRun:
    run_id: str
    status: str = "PENDING"  # PENDING | RUNNING | DONE | FAILED
    doc_count: int = 0
    counters: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "status": self.status,
            "doc_count": self.doc_count,
            "counters": dict(self.counters),
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
            "error": self.error,
        }


def run_pipeline(
    corpus: Corpus,
    config: Config | None = None,
    *,
    run_id: str = "run-0001",
    store_dir: str | Path | None = None,
) -> PipelineRun:
    """Execute every stage and persist the artifacts, all or nothing.

    Raises ValueError on an empty corpus before any stage runs. Stage
    failures are captured on the returned run record (status FAILED) and
    nothing is written to the store.
    """
    if len(corpus) == 0:
        raise ValueError("corpus is empty; nothing to run")
    cfg = config or Config()
    store = Path(store_dir or cfg.store_dir)
    store.mkdir(parents=True, exist_ok=True)
    (store / RUNS_DIR).mkdir(exist_ok=True)

    run = PipelineRun(run_id=run_id, status="RUNNING", doc_count=len(corpus))
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=store))
    stage = _STAGES[0]
    try:
        lexicon = load_lexicon(cfg.gazetteer_dir)

        stage = "extract"
        t0 = time.perf_counter()
        sentence_rows: list[dict] = []
        mention_rows: list[dict] = []
        raw_triples: list[Triple] = []
        for doc in corpus:
            spans = split_sentences(doc)
            mentions = []
            for i, span in enumerate(spans):
                sentence_rows.append(
                    {
                        "doc_id": doc.doc_id,
                        "sentence_index": i,
                        "start": span.start,
                        "end": span.end,
                        "text": span.text,
                    }
                )
                if span.text.strip():
                    mentions.append(
                        recognize_entities(span.text, i, doc_id=doc.doc_id, lexicon=lexicon)
                    )
                else:
                    mentions.append([])
            resolution = resolve_coreferences(
                doc, mentions, window=cfg.coref_window, lexicon=lexicon
            )
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
            raw_triples.extend(extract_triples(doc, resolution, lexicon=lexicon))
        run.timings["extract"] = time.perf_counter() - t0

        stage = "prune"
        t0 = time.perf_counter()
        pruned, report = prune(raw_triples, rules=cfg.prune_rules)
        run.timings["prune"] = time.perf_counter() - t0

        stage = "build"
        t0 = time.perf_counter()
        graph = build_graph(pruned, corpus)
        run.timings["build"] = time.perf_counter() - t0

        stage = "persist"
        t0 = time.perf_counter()
        save_corpus(corpus, staging / CORPUS_FILE)
        _write_jsonl(staging / SENTENCES_FILE, sentence_rows)
        _write_jsonl(staging / MENTIONS_FILE, mention_rows)
        write_triples(raw_triples, staging / RAW_TRIPLES_FILE)
        write_triples(pruned, staging / PRUNED_TRIPLES_FILE)
        (staging / REPORT_FILE).write_text(
            json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8"
        )
        save(graph, staging / GRAPH_FILE)

        run.counters = {
            "sentences": len(sentence_rows),
            "mentions": len(mention_rows),
            "raw_triples": len(raw_triples),
            "pruned_triples": len(pruned),
            "nodes": len(graph.nodes),
            "edges": len(graph.edges),
        }
        run.status = "DONE"
        run.timings["persist"] = time.perf_counter() - t0

        for name in (
            CORPUS_FILE, SENTENCES_FILE, MENTIONS_FILE, RAW_TRIPLES_FILE,
            PRUNED_TRIPLES_FILE, REPORT_FILE, GRAPH_FILE,
        ):
            (staging / name).replace(store / name)
        (store / RUNS_DIR / f"{run_id}.json").write_text(
            json.dumps(run.as_dict(), indent=2) + "\n", encoding="utf-8"
        )
    except Exception as e:  # noqa: BLE001 - run records carry the cause
        run.status = "FAILED"
        run.error = f"{stage}: {e}"
        logger.exception("pipeline run %s failed during %s", run_id, stage)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return run


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


# --- HTTP API -------------------------------------------------------------------


class _State:
    """Mutable service state behind a single lock.

    The graph reference is immutable once published; readers grab it under
    the lock and then work lock-free on the snapshot.
    """

    def __init__(self, config: Config):
        self.config = config
        self.store = Path(config.store_dir)
        self.lock = threading.Lock()
        self.staged: list[Document] = []
        self.graph: ConceptGraph | None = None
        self.raw_triples: list[Triple] = []
        self.pruned_triples: list[Triple] = []
        self.runs: dict[str, PipelineRun] = {}
        self.run_seq = 0
        self.active: str | None = None
        self._restore()

    def _restore(self) -> None:
        store = self.store
        if (store / GRAPH_FILE).exists():
            self.graph = load(store / GRAPH_FILE)
        if (store / CORPUS_FILE).exists():
            self.staged = list(load_corpus(store / CORPUS_FILE))
        if (store / RAW_TRIPLES_FILE).exists():
            self.raw_triples = import_triples(store / RAW_TRIPLES_FILE)
        if (store / PRUNED_TRIPLES_FILE).exists():
            self.pruned_triples = import_triples(store / PRUNED_TRIPLES_FILE)
        runs_dir = store / RUNS_DIR
        if runs_dir.is_dir():
            for f in sorted(runs_dir.glob("run-*.json")):
                rec = json.loads(f.read_text(encoding="utf-8"))
                run = PipelineRun(
                    run_id=rec["run_id"],
                    status=rec["status"],
                    doc_count=rec["doc_count"],
                    counters=rec["counters"],
                    timings=rec["timings"],
                    error=rec.get("error"),
                )
                self.runs[run.run_id] = run
                seq = int(run.run_id.rsplit("-", 1)[1])
                self.run_seq = max(self.run_seq, seq)

    def next_run_id(self) -> str:
        self.run_seq += 1
        return f"run-{self.run_seq:04d}"


def _error(status: int, code: str, message: str, detail: str | None = None) -> JSONResponse:
    return JSONResponse(
        {"code": code, "message": message, "detail": detail}, status_code=status
    )


def _triple_record(t: Triple) -> dict:
    return {
        "subject": t.subject,
        "relation": t.relation,
        "object": t.object,
        "doc_id": t.doc_id,
        "sentence_index": t.sentence_index,
        "triple_index": t.triple_index,
        "confidence": t.confidence,
        "subject_class": t.subject_class,
        "object_class": t.object_class,
    }


def _parse_documents_payload(body: bytes, content_type: str) -> list[Document]:
    """Accept {"documents": [...]} JSON or raw JSONL, one document per line."""
    text = body.decode("utf-8")
    records: list[tuple[int, dict]] = []
    if "application/json" in content_type:
        data = json.loads(text)
        if isinstance(data, dict) and isinstance(data.get("documents"), list):
            records = [(i + 1, rec) for i, rec in enumerate(data["documents"])]
        elif isinstance(data, list):
            records = [(i + 1, rec) for i, rec in enumerate(data)]
        else:
            raise CorpusError("expected a list of documents or {\"documents\": [...]}")
    else:
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append((lineno, json.loads(line)))
            except json.JSONDecodeError as e:
                raise CorpusError(f"line {lineno}: malformed JSON: {e.msg}") from None
    docs = []
    for lineno, rec in records:
        if not isinstance(rec, dict):
            raise CorpusError(f"record {lineno}: expected an object")
        if "doc_id" not in rec or "body" not in rec:
            raise CorpusError(f"record {lineno}: doc_id and body are required")
        try:
            location = rec.get("report_location")
            when = rec.get("report_time")
            docs.append(
                Document(
                    doc_id=str(rec["doc_id"]),
                    title=str(rec.get("title", "")),
                    body=str(rec["body"]),
                    report_location=None if location is None else str(location),
                    report_time=None if when is None else str(when),
                )
            )
        except (CorpusError, ValueError) as e:
            raise CorpusError(f"record {lineno}: {e}") from None
    return docs


def create_app(
    config: Config | None = None, *, frontend_dir: str | Path | None = None
) -> FastAPI:
    cfg = config or Config()
    Path(cfg.store_dir).mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="conceptmap", version=VERSION, docs_url=None, redoc_url=None)
    state = _State(cfg)
    app.state.conceptmap = state

    @app.get("/api/health")
    def health():
        with state.lock:
            graph = state.graph
            active = state.active
            staged = len(state.staged)
        return {
            "status": "ok",
            "version": VERSION,
            "active_run": active,
            "staged_documents": staged,
            "nodes": len(graph.nodes) if graph else 0,
            "edges": len(graph.edges) if graph else 0,
        }

    @app.post("/api/documents")
    async def upload_documents(request: Request, mode: str = "append"):
        if mode not in ("append", "replace"):
            return _error(400, "bad_mode", "mode must be append or replace")
        body = await request.body()
        try:
            docs = _parse_documents_payload(body, request.headers.get("content-type", ""))
        except (CorpusError, json.JSONDecodeError, UnicodeDecodeError) as e:
            return _error(400, "malformed_upload", "could not parse documents", str(e))
        if not docs:
            return _error(400, "empty_upload", "no documents in request body")
        with state.lock:
            existing = [] if mode == "replace" else list(state.staged)
            seen = {d.doc_id for d in existing}
            for d in docs:
                if d.doc_id in seen:
                    return _error(
                        400, "duplicate_doc_id", "duplicate document id", d.doc_id
                    )
                seen.add(d.doc_id)
                existing.append(d)
            state.staged = existing
            staged = len(existing)
        return {"staged": staged, "added": len(docs)}

    def _execute_run(run: PipelineRun, corpus: Corpus) -> None:
        with state.lock:
            run.status = "RUNNING"
        result = run_pipeline(
            corpus, state.config, run_id=run.run_id, store_dir=state.store
        )
        with state.lock:
            state.runs[run.run_id] = result
            state.active = None
            if result.status == "DONE":
                state.graph = load(state.store / GRAPH_FILE)
                state.raw_triples = import_triples(state.store / RAW_TRIPLES_FILE)
                state.pruned_triples = import_triples(state.store / PRUNED_TRIPLES_FILE)

    @app.post("/api/pipeline/run", status_code=202)
    def start_run(wait: bool = False):
        with state.lock:
            if state.active is not None:
                return _error(409, "busy", "a pipeline run is already in progress", state.active)
            if not state.staged:
                return _error(400, "empty_corpus", "no documents staged; upload first")
            corpus = Corpus(documents=tuple(state.staged))
            run = PipelineRun(run_id=state.next_run_id(), status="PENDING")
            state.runs[run.run_id] = run
            state.active = run.run_id
        if wait:
            _execute_run(run, corpus)
            with state.lock:
                return JSONResponse(state.runs[run.run_id].as_dict(), status_code=202)
        thread = threading.Thread(target=_execute_run, args=(run, corpus), daemon=True)
        thread.start()
        return JSONResponse(run.as_dict(), status_code=202)

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        with state.lock:
            run = state.runs.get(run_id)
        if run is None:
            return _error(404, "unknown_run", f"no such run: {run_id}")
        return run.as_dict()

    @app.get("/api/runs/{run_id}/report")
    def get_report(run_id: str):
        with state.lock:
            run = state.runs.get(run_id)
        if run is None:
            return _error(404, "unknown_run", f"no such run: {run_id}")
        if run.status != "DONE":
            return _error(404, "no_report", f"run {run_id} has no report", run.status)
        report_path = state.store / REPORT_FILE
        if not report_path.exists():
            return _error(404, "no_report", "prune report not found on disk")
        return json.loads(report_path.read_text(encoding="utf-8"))

    def _snapshot() -> ConceptGraph | None:
        with state.lock:
            return state.graph

    @app.get("/api/graph")
    def get_graph(limit: int = 500, offset: int = 0):
        graph = _snapshot()
        if graph is None:
            return _error(404, "no_graph", "no graph built yet; run the pipeline")
        if limit < 1 or offset < 0:
            return _error(400, "bad_page", "limit must be >= 1 and offset >= 0")
        page = graph.nodes[offset : offset + limit]
        ids = {n.node_id for n in page}
        doc = to_json_document(graph)
        nodes = [n for n in doc["nodes"] if n["id"] in ids]
        edges = [e for e in doc["edges"] if e["source"] in ids and e["target"] in ids]
        return {
            "nodes": nodes,
            "edges": edges,
            "node_total": len(graph.nodes),
            "edge_total": len(graph.edges),
            "limit": limit,
            "offset": offset,
        }

    def _resolve(graph: ConceptGraph, value: str):
        node = graph.node_by_name(value)
        if node is not None:
            return node
        if value.isdigit() and int(value) in graph:
            return graph.node(int(value))
        return None

    @app.get("/api/graph/path")
    def get_path(source: str = "", target: str = "", directed: bool = False):
        graph = _snapshot()
        if graph is None:
            return _error(404, "no_graph", "no graph built yet; run the pipeline")
        if not source or not target:
            return _error(400, "bad_request", "source and target are required")
        src = _resolve(graph, source)
        if src is None:
            return _error(404, "unknown_node", f"unknown node: {source}", source)
        tgt = _resolve(graph, target)
        if tgt is None:
            return _error(404, "unknown_node", f"unknown node: {target}", target)
        result = shortest_path(graph, src.node_id, tgt.node_id, directed=directed)
        return {
            "found": bool(result),
            "nodes": list(result.nodes),
            "edges": list(result.edges),
            "cost": result.total_cost,
        }

    @app.get("/api/graph/centrality")
    def get_centrality(directed: bool = False, top: int | None = None):
        graph = _snapshot()
        if graph is None:
            return _error(404, "no_graph", "no graph built yet; run the pipeline")
        if top is not None and top < 1:
            return _error(400, "bad_request", "top must be >= 1")
        table = closeness_centrality(graph, directed=directed)
        ranked = top_nodes(table, top)
        return {
            "scores": [
                {
                    "node_id": node_id,
                    "score": score,
                    "display_name": graph.node(node_id).display_name,
                }
                for node_id, score in ranked
            ]
        }

    @app.get("/api/graph/query")
    def get_query(relation: str = ""):
        graph = _snapshot()
        if graph is None:
            return _error(404, "no_graph", "no graph built yet; run the pipeline")
        try:
            sub = query_relations(graph, relation)
        except ValueError as e:
            return _error(400, "bad_query", str(e))
        doc = to_json_document(sub)
        return {
            "nodes": doc["nodes"],
            "edges": doc["edges"],
            "node_total": len(sub.nodes),
            "edge_total": len(sub.edges),
        }

    @app.get("/api/triples")
    def get_triples(stage: str = "pruned", limit: int = 500, offset: int = 0):
        if stage not in ("raw", "pruned"):
            return _error(400, "bad_stage", "stage must be raw or pruned", stage)
        if limit < 1 or offset < 0:
            return _error(400, "bad_page", "limit must be >= 1 and offset >= 0")
        with state.lock:
            triples = state.raw_triples if stage == "raw" else state.pruned_triples
            page = triples[offset : offset + limit]
            total = len(triples)
        return {
            "stage": stage,
            "total": total,
            "limit": limit,
            "offset": offset,
            "triples": [_triple_record(t) for t in page],
        }

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app


def serve(config: Config, *, frontend_dir: str | Path | None = None) -> None:
    """Run the API under uvicorn until interrupted."""
    import uvicorn

    app = create_app(config, frontend_dir=frontend_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
