"""Document corpus loading, validation and sentence segmentation.

A corpus is an immutable, deterministically ordered (by doc_id) collection of
documents. Two ingestion formats are supported: a directory of UTF-8 .txt
files and a JSONL file with one document object per line.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .lexicon import default_abbreviations

MAX_DOC_BYTES_DEFAULT = 1 << 20  # 1 MiB

_CONTROL_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")


class CorpusError(ValueError):
    """Raised for unreadable paths, malformed records and duplicate ids."""


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str
    report_location: str | None = None
    report_time: str | None = None

    def __post_init__(self):
        if not self.doc_id:
            raise CorpusError("document has empty doc_id")
        if self.report_time is not None:
            try:
                datetime.fromisoformat(self.report_time)
            except ValueError:
                raise CorpusError(
                    f"document {self.doc_id!r}: report_time {self.report_time!r} is not ISO-8601"
                ) from None


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    source_manifest: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ids = [d.doc_id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise CorpusError(f"duplicate doc_id(s): {', '.join(dupes)}")
        object.__setattr__(
            self, "documents", tuple(sorted(self.documents, key=lambda d: d.doc_id))
        )
        object.__setattr__(self, "_index", {d.doc_id: d for d in self.documents})

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def get(self, doc_id: str) -> Document | None:
        return self._index.get(doc_id)


def _clean_body(doc_id: str, body: str, strip_control: bool) -> str:
    if _CONTROL_RE.search(body):
        if not strip_control:
            raise CorpusError(f"document {doc_id!r}: body contains control characters")
        body = _CONTROL_RE.sub("", body)
    return body


def ingest_path(
    path: str | Path,
    format: str = "plain_dir",
    *,
    max_doc_bytes: int = MAX_DOC_BYTES_DEFAULT,
    strip_control: bool = True,
) -> Corpus:
    """Load a corpus from a directory of .txt files or a JSONL file.

    plain_dir: one document per *.txt file, doc_id = path relative to the
    directory. jsonl: one JSON object per line with at least {doc_id, body}.
    An empty corpus is an error, as are duplicate ids and oversized bodies.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"path does not exist: {path}")
    if format in ("plain_dir", "plain"):
        docs, manifest = _ingest_plain_dir(path, max_doc_bytes, strip_control)
    elif format == "jsonl":
        docs, manifest = _ingest_jsonl(path, max_doc_bytes, strip_control)
    else:
        raise CorpusError(f"unknown corpus format: {format!r}")
    if not docs:
        raise CorpusError(f"no documents found under {path}")
    return Corpus(documents=tuple(docs), source_manifest=manifest)


def _ingest_plain_dir(path: Path, max_doc_bytes: int, strip_control: bool):
    if not path.is_dir():
        raise CorpusError(f"not a directory: {path}")
    docs, manifest = [], {}
    for f in sorted(path.rglob("*.txt")):
        doc_id = f.relative_to(path).as_posix()
        if f.stat().st_size > max_doc_bytes:
            raise CorpusError(f"document {doc_id!r} exceeds {max_doc_bytes} bytes")
        try:
            body = f.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise CorpusError(f"document {doc_id!r} is not valid UTF-8: {e}") from None
        body = _clean_body(doc_id, body, strip_control)
        docs.append(Document(doc_id=doc_id, title=f.stem, body=body))
        manifest[doc_id] = str(f)
    return docs, manifest


def _ingest_jsonl(path: Path, max_doc_bytes: int, strip_control: bool):
    if not path.is_file():
        raise CorpusError(f"not a file: {path}")
    docs, manifest = [], {}
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}:{lineno}: malformed JSON: {e.msg}") from None
            if not isinstance(rec, dict) or not rec.get("doc_id"):
                raise CorpusError(f"{path}:{lineno}: record missing doc_id")
            doc_id = str(rec["doc_id"])
            if doc_id in seen:
                raise CorpusError(f"{path}:{lineno}: duplicate doc_id {doc_id!r}")
            seen.add(doc_id)
            if "body" not in rec:
                raise CorpusError(f"{path}:{lineno}: record missing body")
            body = str(rec["body"])
            if len(body.encode("utf-8")) > max_doc_bytes:
                raise CorpusError(f"{path}:{lineno}: body exceeds {max_doc_bytes} bytes")
            body = _clean_body(doc_id, body, strip_control)
            try:
                doc = Document(
                    doc_id=doc_id,
                    title=str(rec.get("title") or doc_id),
                    body=body,
                    report_location=rec.get("report_location"),
                    report_time=rec.get("report_time"),
                )
            except CorpusError as e:
                raise CorpusError(f"{path}:{lineno}: {e}") from None
            docs.append(doc)
            manifest[doc_id] = f"{path}:{lineno}"
    return docs, manifest


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus as canonical JSONL (sorted by doc_id, fixed key order)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for d in corpus.documents:
            rec = {"doc_id": d.doc_id, "title": d.title, "body": d.body}
            if d.report_location is not None:
                rec["report_location"] = d.report_location
            if d.report_time is not None:
                rec["report_time"] = d.report_time
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_corpus(path: str | Path) -> Corpus:
    return ingest_path(path, format="jsonl")


# --- sentence segmentation -------------------------------------------------

@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    text: str


_BOUNDARY_RE = re.compile(r"[.!?]+[\"')\]]*(?=\s)")
_PARA_RE = re.compile(r"\n\s*\n")


def split_sentences(doc: Document, abbreviations: frozenset[str] | None = None) -> list[SentenceSpan]:
    """Segment a document body into ordered, non-overlapping sentence spans.

    Boundaries are sentence-final punctuation followed by whitespace and an
    upper-case letter or digit, except after known abbreviations ("Dr.") or
    single-letter initials. Blank lines always end a sentence.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    body = doc.body
    if not body.strip():
        return []

    cut_points = set()
    for m in _BOUNDARY_RE.finditer(body):
        end = m.end()
        nxt = _next_nonspace(body, end)
        if nxt is None or not (body[nxt].isupper() or body[nxt].isdigit()):
            continue
        before = body[: m.start()].rstrip()
        last_word = before.split()[-1] if before.split() else ""
        token = (last_word + ".").lower()
        if token in abbreviations:
            continue
        if len(last_word) == 1 and last_word.isupper():
            continue  # initials like "J. Smith"
        cut_points.add(end)
    for m in _PARA_RE.finditer(body):
        cut_points.add(m.start())

    spans = []
    start = 0
    for cut in sorted(cut_points):
        piece = body[start:cut]
        if piece.strip():
            spans.append(_trimmed_span(body, start, cut))
        start = cut
    if body[start:].strip():
        spans.append(_trimmed_span(body, start, len(body)))
    return spans


def _next_nonspace(text: str, i: int) -> int | None:
    while i < len(text):
        if not text[i].isspace():
            return i
        i += 1
    return None


def _trimmed_span(body: str, start: int, end: int) -> SentenceSpan:
    while start < end and body[start].isspace():
        start += 1
    while end > start and body[end - 1].isspace():
        end -= 1
    return SentenceSpan(start=start, end=end, text=body[start:end])
