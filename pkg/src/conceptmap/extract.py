"""Rule-based mention recognition, pronoun resolution and triple extraction.

The extractor is deterministic and lexicon-backed: gazetteers classify
entity mentions, a light tagger chunks each sentence into noun phrases and
verb groups, and clause patterns emit (subject, relation, object) triples.
Nested prepositional triples are emitted on purpose; the domination rules
exist to collapse them later. Extraction is pure per document.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, split_sentences
from .lexicon import Lexicon, load_lexicon
from .textutil import stem_token, tokenize

ENTITY_CLASSES = ("PERSON", "ORGANIZATION", "LOCATION", "UNKNOWN")

# possessives act as determiners when they sit in front of a noun phrase
_POSSESSIVES = frozenset({"his", "her", "its", "their", "my", "your", "our"})


class TripleImportError(ValueError):
    """Raised for malformed triple-interchange files."""


@dataclass(frozen=True)
class Mention:
    doc_id: str
    sentence_index: int
    start: int  # character offsets within the sentence
    end: int
    surface: str
    entity_class: str = "UNKNOWN"
    pronominal: bool = False
    number: str = "SINGULAR"  # SINGULAR | PLURAL | AMBIGUOUS


@dataclass(frozen=True)
class Triple:
    subject: str
    relation: str
    object: str
    doc_id: str
    sentence_index: int
    triple_index: int
    confidence: float = 1.0
    subject_class: str = "UNKNOWN"
    object_class: str = "UNKNOWN"

    @property
    def key(self) -> tuple[str, int, int]:
        """Canonical provenance/ordering key."""
        return (self.doc_id, self.sentence_index, self.triple_index)


@dataclass
class ResolutionMap:
    """Pronoun mention -> nominal antecedent mention."""

    entries: dict[Mention, Mention] = field(default_factory=dict)

    def __post_init__(self):
        self._by_pos = {
            (m.sentence_index, m.start): ant for m, ant in self.entries.items()
        }

    def antecedent_at(self, sentence_index: int, start: int) -> Mention | None:
        return self._by_pos.get((sentence_index, start))

    def __len__(self) -> int:
        return len(self.entries)


# --- tagging ----------------------------------------------------------------

# tag values: DET PRON VERB AUX PREP ADV ADJ NOUN PROPN NUM CONJ PUNCT

@dataclass
class _Tok:
    start: int
    end: int
    text: str
    tag: str

    @property
    def lower(self) -> str:
        return self.text.casefold()


def _is_verbish(lower: str, lex: Lexicon) -> bool:
    if lower in lex.verbs:
        return True
    stem = stem_token(lower)
    # "described" stems to "describ"; restore the silent e before lookup
    return stem in lex.verbs or stem + "e" in lex.verbs


def _tag_sentence(sentence: str, lex: Lexicon) -> list[_Tok]:
    raw = tokenize(sentence)
    toks: list[_Tok] = []
    for i, (s, e, t) in enumerate(raw):
        lower = t.casefold()
        if not t[0].isalnum():
            tag = "PUNCT"
        elif t[0].isdigit():
            tag = "NUM"
        elif lower in _POSSESSIVES:
            nxt = raw[i + 1][2].casefold() if i + 1 < len(raw) else ""
            noun_ahead = bool(nxt) and nxt[0].isalnum() and not (
                nxt in lex.aux_verbs or nxt in lex.prepositions or _is_verbish(nxt, lex)
            )
            tag = "DET" if noun_ahead else "PRON"
        elif lower in lex.determiners:
            tag = "DET"
        elif lower in lex.pronouns:
            tag = "PRON"
        elif lower in lex.aux_verbs:
            tag = "AUX"
        elif lower in lex.conjunctions:
            tag = "CONJ"
        elif lower in lex.prepositions:
            tag = "PREP"
        elif lower in lex.adverbs:
            tag = "ADV"
        elif lower in lex.adjectives or lower in lex.direction_words:
            tag = "ADJ"
        elif _is_verbish(lower, lex) and not (t[0].isupper() and i > 0):
            # capitalized mid-sentence verb homographs read as names
            # ("the Transport Ministry")
            tag = "VERB"
        elif t[0].isupper():
            tag = "PROPN"
        else:
            tag = "NOUN"
        toks.append(_Tok(s, e, t, tag))

    # positional repairs
    for i, tok in enumerate(toks):
        prev = toks[i - 1] if i > 0 else None
        # noun/verb homographs after a determiner or adjective read as nouns
        if tok.tag == "VERB" and prev is not None and prev.tag in ("DET", "ADJ"):
            tok.tag = "NOUN"
        # sentence-initial capitalized common words are not proper nouns
        if i == 0 and tok.tag == "PROPN":
            nxt = toks[1] if len(toks) > 1 else None
            known = (
                tok.lower in lex.given_names
                or tok.lower in lex.locations
                or tok.lower in lex.honorifics
            )
            if not known and not (nxt is not None and nxt.tag == "PROPN"):
                tok.tag = "NOUN"
    return toks


# --- mention recognition -----------------------------------------------------

def recognize_entities(
    sentence: str,
    position: int,
    *,
    doc_id: str = "",
    lexicon: Lexicon | None = None,
) -> list[Mention]:
    """Extract typed entity mentions plus untyped noun-phrase mentions.

    Gazetteer matches win over orthographic rules; lowercase noun phrases
    are emitted as UNKNOWN mentions only where no entity mention overlaps.
    """
    if not sentence.strip():
        raise ValueError("recognize_entities requires a non-empty sentence")
    lex = lexicon or load_lexicon()
    toks = _tag_sentence(sentence, lex)
    mentions: list[Mention] = []
    claimed: list[tuple[int, int]] = []

    def claim(start_tok: int, end_tok: int, cls: str, number: str | None = None):
        s, e = toks[start_tok].start, toks[end_tok].end
        surface = sentence[s:e]
        if number is None:
            number = "AMBIGUOUS" if cls == "ORGANIZATION" else "SINGULAR"
        mentions.append(
            Mention(
                doc_id=doc_id, sentence_index=position, start=s, end=e,
                surface=surface, entity_class=cls, pronominal=False, number=number,
            )
        )
        claimed.append((s, e))

    word_idx = [i for i, t in enumerate(toks) if t.tag not in ("PUNCT",)]
    n = len(toks)

    # 1. multiword gazetteer matches, longest first
    i = 0
    while i < n:
        if toks[i].tag == "PUNCT" or _covered(toks[i], claimed):
            i += 1
            continue
        matched = 0
        matched_cls = ""
        for length in range(min(5, n - i), 0, -1):
            seq = toks[i : i + length]
            if any(t.tag == "PUNCT" for t in seq):
                continue
            phrase = " ".join(t.lower for t in seq)
            if length > 1 and phrase in lex.person_names:
                matched, matched_cls = length, "PERSON"
                break
            if length > 1 and phrase in lex.locations:
                matched, matched_cls = length, "LOCATION"
                break
        if matched:
            start_tok = i
            # a title directly before a known person belongs to the name
            if (
                matched_cls == "PERSON"
                and i > 0
                and toks[i - 1].tag == "PROPN"
                and toks[i - 1].lower in lex.honorifics
                and not _covered(toks[i - 1], claimed)
            ):
                start_tok = i - 1
            claim(start_tok, i + matched - 1, matched_cls)
            i += matched
        else:
            i += 1

    # 2. orthographic rules over maximal PROPN runs
    i = 0
    while i < n:
        if toks[i].tag != "PROPN" or _covered(toks[i], claimed):
            i += 1
            continue
        j = i
        while j + 1 < n and toks[j + 1].tag == "PROPN" and not _covered(toks[j + 1], claimed):
            j += 1
        run = toks[i : j + 1]
        start_tok, end_tok = i, j
        cls = "UNKNOWN"
        if run[-1].lower in lex.org_suffixes:
            cls = "ORGANIZATION"
        elif run[0].lower in lex.honorifics and len(run) > 1:
            cls = "PERSON"
        elif " ".join(t.lower for t in run) in lex.person_names:
            cls = "PERSON"
        elif len(run) > 1 and run[0].lower in lex.given_names:
            cls = "PERSON"
        elif any(t.lower in lex.locations for t in run):
            cls = "LOCATION"
        elif len(run) == 1 and run[0].lower in lex.given_names:
            cls = "PERSON"
        # trailing lowercase location suffix extends the span: "Dyala river"
        if j + 1 < n and toks[j + 1].lower in lex.location_suffixes and cls in ("UNKNOWN", "LOCATION"):
            end_tok = j + 1
            cls = "LOCATION"
        # leading direction modifier extends a location: "eastern Baghdad"
        if cls == "LOCATION" and i > 0 and toks[i - 1].lower in lex.direction_words:
            start_tok = i - 1
        claim(start_tok, end_tok, cls)
        i = end_tok + 1

    # lone "<Direction> <suffix>" phrases ("the northern district") stay NPs

    # 3. pronouns
    for i in word_idx:
        t = toks[i]
        if t.tag != "PRON":
            continue
        info = lex.pronoun(t.lower)
        if info is None:
            continue
        mentions.append(
            Mention(
                doc_id=doc_id, sentence_index=position, start=t.start, end=t.end,
                surface=t.text, entity_class="UNKNOWN", pronominal=True,
                number=info.number,
            )
        )
        claimed.append((t.start, t.end))

    # 4. noun phrases not overlapping any mention so far
    for np in _noun_phrases(toks, lex):
        s, e = toks[np[0]].start, toks[np[-1]].end
        if any(not (e <= cs or s >= ce) for cs, ce in claimed):
            continue
        head = _np_head(toks, np, lex)
        mentions.append(
            Mention(
                doc_id=doc_id, sentence_index=position, start=s, end=e,
                surface=sentence[s:e], entity_class="UNKNOWN", pronominal=False,
                number=_noun_number(head, lex),
            )
        )

    mentions.sort(key=lambda m: (m.start, m.end))
    return mentions


def _covered(tok: _Tok, claimed: list[tuple[int, int]]) -> bool:
    return any(cs <= tok.start < ce for cs, ce in claimed)


_NP_TAGS = ("DET", "ADJ", "NOUN", "PROPN", "NUM")


def _noun_phrases(toks: list[_Tok], lex: Lexicon) -> list[list[int]]:
    """Indices of NP chunks: (DET)? (ADJ|NUM|NOUN|PROPN)+ with 'of' absorption."""
    phrases = []
    i, n = 0, len(toks)
    while i < n:
        if toks[i].tag not in _NP_TAGS:
            i += 1
            continue
        j = i
        idxs = []
        while j < n and toks[j].tag in _NP_TAGS:
            idxs.append(j)
            j += 1
        if not any(toks[k].tag in ("NOUN", "PROPN") for k in idxs):
            i = j
            continue
        # absorb genitive attachments: "group of soldiers"
        while (
            j + 1 < n
            and toks[j].lower == "of"
            and toks[j + 1].tag in _NP_TAGS
        ):
            idxs.append(j)
            j += 1
            while j < n and toks[j].tag in _NP_TAGS:
                idxs.append(j)
                j += 1
        phrases.append(idxs)
        i = j
    return phrases


def _np_head(toks: list[_Tok], np: list[int], lex: Lexicon) -> str:
    """Head noun: last NOUN/PROPN before any 'of' attachment."""
    head = ""
    for k in np:
        if toks[k].lower == "of":
            break
        if toks[k].tag in ("NOUN", "PROPN"):
            head = toks[k].lower
    return head


def _noun_number(head: str, lex: Lexicon) -> str:
    if not head:
        return "SINGULAR"
    if head in lex.collective_nouns:
        return "AMBIGUOUS"
    if head in lex.plural_nouns:
        return "PLURAL"
    if len(head) > 3 and head.endswith("s") and not head.endswith("ss"):
        return "PLURAL"
    return "SINGULAR"


# --- coreference -------------------------------------------------------------

def resolve_coreferences(
    doc: Document,
    mentions: list[list[Mention]],
    *,
    window: int = 2,
    lexicon: Lexicon | None = None,
) -> ResolutionMap:
    """Map each pronoun to the nearest preceding compatible nominal mention.

    Candidates are scanned backwards within `window` sentences. Number must
    agree (collectives count as plural-compatible); gender is enforced only
    for gendered pronouns against gazetteer-gendered names. Pronouns with no
    compatible antecedent are left out of the map.
    """
    lex = lexicon or load_lexicon()
    entries: dict[Mention, Mention] = {}
    flat: list[Mention] = [m for sent in mentions for m in sent]
    flat.sort(key=lambda m: (m.sentence_index, m.start))

    for p in flat:
        if not p.pronominal:
            continue
        info = lex.pronoun(p.surface)
        if info is None:
            continue
        best = None
        for m in reversed(flat):
            if m.pronominal:
                continue
            if (m.sentence_index, m.start) >= (p.sentence_index, p.start):
                continue
            if p.sentence_index - m.sentence_index > window:
                break  # flat is sorted; everything earlier is even further
            if not _number_compatible(info.number, m.number):
                continue
            if info.gender in ("male", "female"):
                g = _name_gender(m.surface, lex)
                if g is not None and g != info.gender:
                    continue
            best = m
            break
        if best is not None:
            entries[p] = best
    return ResolutionMap(entries=entries)


def _number_compatible(pronoun_number: str, mention_number: str) -> bool:
    if pronoun_number == "AMBIGUOUS" or mention_number == "AMBIGUOUS":
        return True
    return pronoun_number == mention_number


def _name_gender(surface: str, lex: Lexicon) -> str | None:
    for w in surface.split():
        lw = w.casefold().strip(".,;:'\"")
        if lw in lex.female_names:
            return "female"
        if lw in lex.male_names:
            return "male"
    return None


# --- triple extraction -------------------------------------------------------

@dataclass
class _Chunk:
    kind: str  # NP | VG | PREP | CONJ
    tok_idxs: list[int]


def _chunk_sentence(toks: list[_Tok], lex: Lexicon) -> list[_Chunk]:
    chunks: list[_Chunk] = []
    np_spans = _noun_phrases(toks, lex)
    np_starts = {np[0]: np for np in np_spans}
    i, n = 0, len(toks)
    while i < n:
        if i in np_starts:
            np = np_starts[i]
            chunks.append(_Chunk("NP", np))
            i = np[-1] + 1
            continue
        tag = toks[i].tag
        if tag in ("VERB", "AUX"):
            idxs = [i]
            j = i + 1
            while j < n and toks[j].tag in ("VERB", "AUX", "ADV"):
                idxs.append(j)
                j += 1
            chunks.append(_Chunk("VG", idxs))
            i = idxs[-1] + 1
            continue
        if tag == "PREP":
            chunks.append(_Chunk("PREP", [i]))
        elif tag == "CONJ":
            chunks.append(_Chunk("CONJ", [i]))
        elif tag == "PRON":
            chunks.append(_Chunk("NP", [i]))
        i += 1

    # merge infinitives: VG + "to" + VG -> one verb group
    merged: list[_Chunk] = []
    k = 0
    while k < len(chunks):
        c = chunks[k]
        if (
            c.kind == "VG"
            and k + 2 < len(chunks)
            and chunks[k + 1].kind == "PREP"
            and toks[chunks[k + 1].tok_idxs[0]].lower == "to"
            and chunks[k + 2].kind == "VG"
        ):
            c = _Chunk("VG", c.tok_idxs + chunks[k + 1].tok_idxs + chunks[k + 2].tok_idxs)
            k += 3
        else:
            k += 1
        merged.append(c)
    return merged


def extract_triples(
    doc: Document,
    resolution: ResolutionMap,
    *,
    lexicon: Lexicon | None = None,
) -> list[Triple]:
    """Emit clause-pattern triples for every sentence of the document.

    Pattern: NP VG [PREP] NP, plus one nested triple per trailing
    prepositional attachment. Whole-NP pronouns are replaced with their
    antecedent surface; triples with unresolved pronouns are dropped.
    """
    lex = lexicon or load_lexicon()
    triples: list[Triple] = []
    for s_idx, span in enumerate(split_sentences(doc)):
        sentence = span.text
        toks = _tag_sentence(sentence, lex)
        chunks = _chunk_sentence(toks, lex)
        ent_mentions = [
            m
            for m in recognize_entities(sentence, s_idx, doc_id=doc.doc_id, lexicon=lex)
            if m.entity_class != "UNKNOWN" and not m.pronominal
        ]
        t_idx = 0
        last_subject: _Chunk | None = None
        for ci, ch in enumerate(chunks):
            if ch.kind != "VG":
                continue
            subject = None
            if ci > 0 and chunks[ci - 1].kind == "NP":
                subject = chunks[ci - 1]
                last_subject = subject
            elif ci > 0 and chunks[ci - 1].kind == "CONJ" and last_subject is not None:
                subject = last_subject
            if subject is None:
                continue

            rel_idxs = list(ch.tok_idxs)
            j = ci + 1
            if j < len(chunks) and chunks[j].kind == "PREP":
                rel_idxs += chunks[j].tok_idxs
                j += 1
            if j >= len(chunks) or chunks[j].kind != "NP":
                continue
            obj = chunks[j]

            emitted = _emit(
                doc, s_idx, t_idx, sentence, toks, subject, rel_idxs, obj,
                resolution, ent_mentions, lex,
            )
            if emitted is not None:
                triples.append(emitted)
                t_idx += 1

            # nested triples for trailing prepositional attachments
            nest_rel = list(rel_idxs)
            prev_obj = obj
            k = j + 1
            while (
                k + 1 < len(chunks)
                and chunks[k].kind == "PREP"
                and chunks[k + 1].kind == "NP"
            ):
                nest_rel = nest_rel + prev_obj.tok_idxs + chunks[k].tok_idxs
                nested = _emit(
                    doc, s_idx, t_idx, sentence, toks, subject, nest_rel,
                    chunks[k + 1], resolution, ent_mentions, lex,
                )
                if nested is not None:
                    triples.append(nested)
                    t_idx += 1
                prev_obj = chunks[k + 1]
                k += 2
    return triples


def _chunk_text(sentence: str, toks: list[_Tok], idxs: list[int]) -> str:
    return " ".join(toks[k].text for k in idxs)


def _np_surface(sentence: str, toks: list[_Tok], np: _Chunk) -> str:
    return sentence[toks[np.tok_idxs[0]].start : toks[np.tok_idxs[-1]].end]


def _emit(
    doc: Document,
    s_idx: int,
    t_idx: int,
    sentence: str,
    toks: list[_Tok],
    subject: _Chunk,
    rel_idxs: list[int],
    obj: _Chunk,
    resolution: ResolutionMap,
    ent_mentions: list[Mention],
    lex: Lexicon,
) -> Triple | None:
    subj_text, subj_cls = _np_value(sentence, s_idx, toks, subject, resolution, ent_mentions)
    if subj_text is None:
        return None
    obj_text, obj_cls = _np_value(sentence, s_idx, toks, obj, resolution, ent_mentions)
    if obj_text is None:
        return None
    relation = _chunk_text(sentence, toks, rel_idxs)
    if not subj_text.strip() or not relation.strip() or not obj_text.strip():
        return None
    return Triple(
        subject=subj_text,
        relation=relation,
        object=obj_text,
        doc_id=doc.doc_id,
        sentence_index=s_idx,
        triple_index=t_idx,
        confidence=1.0,
        subject_class=subj_cls,
        object_class=obj_cls,
    )


def _np_value(
    sentence: str,
    s_idx: int,
    toks: list[_Tok],
    np: _Chunk,
    resolution: ResolutionMap,
    ent_mentions: list[Mention],
) -> tuple[str | None, str]:
    """Surface text and entity class for an NP, with pronoun substitution.

    Returns (None, ...) when the NP is an unresolved pronoun: the triple
    is dropped because a bare pronoun is useless outside its sentence.
    """
    idxs = np.tok_idxs
    if len(idxs) == 1 and toks[idxs[0]].tag == "PRON":
        tok = toks[idxs[0]]
        ant = resolution.antecedent_at(s_idx, tok.start)
        if ant is None:
            return None, "UNKNOWN"
        return ant.surface, ant.entity_class
    surface = _np_surface(sentence, toks, np)
    s, e = toks[idxs[0]].start, toks[idxs[-1]].end
    cls = "UNKNOWN"
    best_overlap = 0
    for m in ent_mentions:
        overlap = min(e, m.end) - max(s, m.start)
        if overlap > best_overlap:
            best_overlap = overlap
            cls = m.entity_class
    return surface, cls


# --- document / corpus pipeline ----------------------------------------------

def extract_document(
    doc: Document, *, window: int = 2, lexicon: Lexicon | None = None
) -> tuple[list[list[Mention]], ResolutionMap, list[Triple]]:
    """Run mention recognition, coreference and extraction for one document."""
    lex = lexicon or load_lexicon()
    mentions = []
    for i, span in enumerate(split_sentences(doc)):
        if span.text.strip():
            mentions.append(recognize_entities(span.text, i, doc_id=doc.doc_id, lexicon=lex))
        else:
            mentions.append([])
    resolution = resolve_coreferences(doc, mentions, window=window, lexicon=lex)
    triples = extract_triples(doc, resolution, lexicon=lex)
    return mentions, resolution, triples


# --- triple interchange format -------------------------------------------------

_REQUIRED_FIELDS = ("subject", "relation", "object", "doc_id", "sentence_index", "triple_index")


def import_triples(path: str | Path) -> list[Triple]:
    """Read triples from the JSONL interchange format, validating invariants."""
    path = Path(path)
    triples: list[Triple] = []
    seen: set[tuple[str, int, int]] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise TripleImportError(f"{path}:{lineno}: malformed JSON: {e.msg}") from None
            for f in _REQUIRED_FIELDS:
                if f not in rec:
                    raise TripleImportError(f"{path}:{lineno}: missing field {f!r}")
            for f in ("subject", "relation", "object"):
                if not str(rec[f]).strip():
                    raise TripleImportError(f"{path}:{lineno}: empty {f}")
            try:
                t = Triple(
                    subject=str(rec["subject"]),
                    relation=str(rec["relation"]),
                    object=str(rec["object"]),
                    doc_id=str(rec["doc_id"]),
                    sentence_index=int(rec["sentence_index"]),
                    triple_index=int(rec["triple_index"]),
                    confidence=float(rec.get("confidence", 1.0)),
                    subject_class=str(rec.get("subject_class", "UNKNOWN")),
                    object_class=str(rec.get("object_class", "UNKNOWN")),
                )
            except (TypeError, ValueError) as e:
                raise TripleImportError(f"{path}:{lineno}: {e}") from None
            if t.subject_class not in ENTITY_CLASSES or t.object_class not in ENTITY_CLASSES:
                raise TripleImportError(f"{path}:{lineno}: unknown entity class")
            if not 0.0 <= t.confidence <= 1.0:
                raise TripleImportError(f"{path}:{lineno}: confidence out of [0,1]")
            if t.key in seen:
                raise TripleImportError(f"{path}:{lineno}: duplicate ordering key {t.key}")
            seen.add(t.key)
            triples.append(t)
    return triples


def write_triples(triples: list[Triple], path: str | Path) -> None:
    """Write triples as canonical JSONL, sorted by provenance key."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for t in sorted(triples, key=lambda t: t.key):
            rec = {
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
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
