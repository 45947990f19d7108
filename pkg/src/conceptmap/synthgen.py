"""Deterministic generators for benchmark fixtures.

`gen_stress_triples` emits exactly 8,603 triples engineered so the four
pruning rules remove 4,394 of them: 215 singletons survive untouched, 3,594
two-triple groups each lose one member (rules rotate R1, R2, R3, R4), and
400 three-triple groups each lose two (rotating R1, R2, R3). Group
vocabularies carry the group index in every field, so no rule can fire
across groups, and each group sits alone in its own sentence, which keeps
the crossover rule scoped as designed. `gen_corpus` produces an arbitrarily
large synthetic report collection for throughput measurements.
"""
from __future__ import annotations

import random
from datetime import datetime, timedelta

from .corpus import Corpus, Document
from .extract import Triple

STRESS_SINGLETONS = 215
STRESS_PAIRS = 3594
STRESS_TRIOS = 400
STRESS_TOTAL = STRESS_SINGLETONS + 2 * STRESS_PAIRS + 3 * STRESS_TRIOS
STRESS_SURVIVORS = STRESS_SINGLETONS + STRESS_PAIRS + STRESS_TRIOS


def _provenance(group: int) -> tuple[str, int]:
    return f"stress-{group // 100:03d}", group % 100


def gen_stress_triples(*, shuffle_seed: int = 8603) -> list[Triple]:
    """The 8,603-record redundancy stress fixture, in shuffled file order.

    Provenance keys are fixed before shuffling, so pruning results do not
    depend on the emission order.
    """
    triples: list[Triple] = []

    def emit(group: int, idx: int, s: str, r: str, o: str) -> None:
        doc_id, sentence = _provenance(group)
        triples.append(
            Triple(
                subject=s, relation=r, object=o,
                doc_id=doc_id, sentence_index=sentence, triple_index=idx,
            )
        )

    group = 0
    for _ in range(STRESS_SINGLETONS):
        g = group
        emit(g, 0, f"scout {g}", f"watched route {g}", f"the convoy {g}")
        group += 1

    for k in range(STRESS_PAIRS):
        g = group
        kind = k % 4
        if kind == 0:
            # shared subject+relation; shorter object loses
            emit(g, 0, f"courier {g}", f"carried parcel {g} to", f"market {g}")
            emit(g, 1, f"courier {g}", f"carried parcel {g} to", f"crowded market {g}")
        elif kind == 1:
            # shared subject+object; shorter relation loses
            emit(g, 0, f"platoon {g}", f"secured {g}", f"bridge {g}")
            emit(g, 1, f"platoon {g}", f"quickly secured {g}", f"bridge {g}")
        elif kind == 2:
            # shared relation+object; shorter subject loses
            emit(g, 0, f"crew {g}", f"repaired line {g}", f"generator {g}")
            emit(g, 1, f"night crew {g}", f"repaired line {g}", f"generator {g}")
        else:
            # relation of the first contains the object of the second
            emit(g, 0, f"envoy {g}", f"flew to hub {g} in", f"spring {g}")
            emit(g, 1, f"envoy {g}", f"flew to", f"hub {g}")
        group += 1

    for k in range(STRESS_TRIOS):
        g = group
        kind = k % 3
        if kind == 0:
            emit(g, 0, f"leader {g}", f"praised {g}", f"crowd {g}")
            emit(g, 1, f"leader {g}", f"praised {g}", f"large crowd {g}")
            emit(g, 2, f"leader {g}", f"praised {g}", f"very large crowd {g}")
        elif kind == 1:
            emit(g, 0, f"squad {g}", f"held {g}", f"outpost {g}")
            emit(g, 1, f"squad {g}", f"firmly held {g}", f"outpost {g}")
            emit(g, 2, f"squad {g}", f"very firmly held {g}", f"outpost {g}")
        else:
            emit(g, 0, f"unit {g}", f"guarded {g}", f"depot {g}")
            emit(g, 1, f"reserve unit {g}", f"guarded {g}", f"depot {g}")
            emit(g, 2, f"second reserve unit {g}", f"guarded {g}", f"depot {g}")
        group += 1

    assert len(triples) == STRESS_TOTAL
    random.Random(shuffle_seed).shuffle(triples)
    return triples


# --- synthetic report corpus ---------------------------------------------------

_PEOPLE = (
    "Omar Haddad", "Farid Halabi", "Tupak Sumatra", "Qasim al-Rawi",
    "John", "Mary", "Ahmed Mahmoud", "Hassan Karim", "Sara Aziz", "Layla Nasser",
)
_CITIES = ("Baghdad", "Karbala", "Fallujah", "Mosul", "Basra", "Najaf", "Samarra")
_DIRECTIONS = ("eastern", "western", "northern", "southern")
_MONTHS = ("January", "February", "March", "April", "May", "June")
_PLACES = ("bunker", "compound", "checkpoint", "warehouse", "depot", "mosque", "market")
_ROLES = ("leader", "commander", "informant", "cleric", "merchant")
_COLLECTIVES = ("group", "squad", "platoon", "crew", "team")
_ORGS = ("Badr Brigade", "Transport Ministry", "Red Crescent Society")
_VERBS_PLACE = ("entered", "left", "raided", "searched", "guarded")
_THINGS = ("shipment", "meeting", "protest", "convoy", "broadcast")


def _doc_sentences(rng: random.Random) -> list[str]:
    person = rng.choice(_PEOPLE)
    city = rng.choice(_CITIES)
    sentences = [
        f"{person} traveled to {rng.choice(_DIRECTIONS)} {city} in {rng.choice(_MONTHS)}.",
        f"The {rng.choice(_COLLECTIVES)} of soldiers {rng.choice(_VERBS_PLACE)} the {rng.choice(_PLACES)} yesterday.",
    ]
    if rng.random() < 0.5:
        sentences.append("They returned this morning.")
    if rng.random() < 0.6:
        sentences.append(f"{rng.choice(_PEOPLE)} spoke to the {rng.choice(_ROLES)}.")
    if rng.random() < 0.4:
        sentences.append(f"The {rng.choice(_ORGS)} funded the {rng.choice(_THINGS)}.")
    if rng.random() < 0.4:
        sentences.append(f"The men met near the {rng.choice(_PLACES)}.")
    rng.shuffle(sentences)
    return sentences


def gen_corpus(n_docs: int = 1000, seed: int = 2010) -> Corpus:
    """Synthetic report collection with extraction-friendly sentences."""
    if n_docs < 1:
        raise ValueError("n_docs must be >= 1")
    rng = random.Random(seed)
    start = datetime(2010, 3, 1, 6, 0, 0)
    docs = []
    for i in range(n_docs):
        body = " ".join(_doc_sentences(rng))
        docs.append(
            Document(
                doc_id=f"report-{i:04d}",
                title=f"field report {i}",
                body=body,
                report_location=rng.choice(_CITIES),
                report_time=(start + timedelta(minutes=17 * i)).isoformat(),
            )
        )
    return Corpus(documents=tuple(docs))


def demo_corpus() -> Corpus:
    """Two-document walkthrough corpus used by the quickstart and tests."""
    d1 = Document(
        doc_id="demo-001",
        title="patrol report",
        body="The group of soldiers left the bunker yesterday. They returned this morning.",
        report_location="Baghdad",
        report_time="2010-03-01T08:00:00",
    )
    d2 = Document(
        doc_id="demo-002",
        title="meeting report",
        body="The men spoke to their leader. John traveled to eastern Baghdad.",
        report_location="Baghdad",
        report_time="2010-03-02T09:30:00",
    )
    return Corpus(documents=(d1, d2))
