"""Redundancy pruning for relation triples via four dominating decision rules.

R1 collapses triples sharing a subject and relation, keeping the most
informative object. R2 does the same over relations for a shared subject and
object, R3 over subjects for a shared relation and object. R4 removes a
triple whose object is textually subsumed by another triple's relation,
restricted to triples from the same sentence. Rules run in a fixed order to
a fixed point, so the survivor set does not depend on input order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .extract import Triple
from .textutil import contains_token_seq, normalize_phrase

logger = logging.getLogger(__name__)

Key = tuple[str, int, int]

RULE_IDS = ("R1", "R2", "R3", "R4")


class EmptyFieldError(ValueError):
    """A triple field normalized to the empty string."""


@dataclass(frozen=True)
class NormalizedTriple:
    original: Triple
    norm_subject: str
    norm_relation: str
    norm_object: str
    # token counts; character counts for tie-breaks come off the norm strings
    info_subject: int
    info_relation: int
    info_object: int

    @property
    def key(self) -> Key:
        return self.original.key

    def info(self, field_name: str) -> tuple[int, int]:
        """(token count, character count) for one normalized field."""
        text: str = getattr(self, "norm_" + field_name)
        tokens: int = getattr(self, "info_" + field_name)
        return tokens, len(text)


@dataclass(frozen=True)
class Removal:
    removed: Key
    kept: Key
    rule: str


@dataclass
class PruneReport:
    input_count: int
    output_count: int
    passes: int
    removals: list[Removal] = field(default_factory=list)

    def rule_counts(self) -> dict[str, int]:
        counts = {r: 0 for r in RULE_IDS}
        for rm in self.removals:
            counts[rm.rule] += 1
        return counts

    def as_dict(self) -> dict:
        return {
            "input_count": self.input_count,
            "output_count": self.output_count,
            "passes": self.passes,
            "rule_counts": self.rule_counts(),
            "removals": [
                {"removed": list(r.removed), "kept": list(r.kept), "rule": r.rule}
                for r in self.removals
            ],
        }


def normalize(t: Triple) -> NormalizedTriple:
    """Normalize all three fields and score them by token count.

    Raises EmptyFieldError when a field normalizes to nothing; callers
    discard such triples before the rules run.
    """
    ns = normalize_phrase(t.subject)
    nr = normalize_phrase(t.relation)
    no = normalize_phrase(t.object)
    if not ns or not nr or not no:
        raise EmptyFieldError(f"triple {t.key} has a field that normalizes to nothing")
    return NormalizedTriple(
        original=t,
        norm_subject=ns,
        norm_relation=nr,
        norm_object=no,
        info_subject=len(ns.split()),
        info_relation=len(nr.split()),
        info_object=len(no.split()),
    )


def _keep_max(
    group: list[NormalizedTriple], measured: str
) -> tuple[NormalizedTriple, list[NormalizedTriple]]:
    # most tokens, then most characters, then earliest provenance key
    ranked = sorted(
        group,
        key=lambda nt: (-nt.info(measured)[0], -nt.info(measured)[1], nt.key),
    )
    return ranked[0], ranked[1:]


def _group_rule(
    triples: Iterable[NormalizedTriple],
    key_fn: Callable[[NormalizedTriple], tuple[str, str]],
    measured: str,
    rule_id: str,
) -> list[Removal]:
    groups: dict[tuple[str, str], list[NormalizedTriple]] = {}
    for nt in triples:
        groups.setdefault(key_fn(nt), []).append(nt)
    removals: list[Removal] = []
    for group in groups.values():
        if len(group) < 2:
            continue
        winner, losers = _keep_max(group, measured)
        removals.extend(Removal(removed=nt.key, kept=winner.key, rule=rule_id) for nt in losers)
    removals.sort(key=lambda r: r.removed)
    return removals


def rule_subject_relation(triples: Iterable[NormalizedTriple]) -> list[Removal]:
    """Shared (subject, relation): keep the most informative object."""
    return _group_rule(triples, lambda nt: (nt.norm_subject, nt.norm_relation), "object", "R1")


def rule_subject_object(triples: Iterable[NormalizedTriple]) -> list[Removal]:
    """Shared (subject, object): keep the most informative relation."""
    return _group_rule(triples, lambda nt: (nt.norm_subject, nt.norm_object), "relation", "R2")


def rule_relation_object(triples: Iterable[NormalizedTriple]) -> list[Removal]:
    """Shared (relation, object): keep the most informative subject."""
    return _group_rule(triples, lambda nt: (nt.norm_relation, nt.norm_object), "subject", "R3")


def rule_crossover(triples: Iterable[NormalizedTriple]) -> list[Removal]:
    """Remove a triple whose object is contained in a sibling's relation.

    Containment is whole-token-sequence, and only triples from the same
    document sentence are compared. Pairs are scanned in provenance order;
    a triple knocked out earlier in the scan cannot remove anything.
    """
    buckets: dict[tuple[str, int], list[NormalizedTriple]] = {}
    for nt in triples:
        sent = (nt.original.doc_id, nt.original.sentence_index)
        buckets.setdefault(sent, []).append(nt)
    removals: list[Removal] = []
    for bucket in buckets.values():
        if len(bucket) < 2:
            continue
        bucket.sort(key=lambda nt: nt.key)
        alive = {nt.key for nt in bucket}
        for a in bucket:
            if a.key not in alive:
                continue
            for b in bucket:
                if b.key == a.key or b.key not in alive:
                    continue
                if contains_token_seq(a.norm_relation, b.norm_object):
                    alive.discard(b.key)
                    removals.append(Removal(removed=b.key, kept=a.key, rule="R4"))
    removals.sort(key=lambda r: r.removed)
    return removals


_RULES: tuple[tuple[str, Callable[[Iterable[NormalizedTriple]], list[Removal]]], ...] = (
    ("R1", rule_subject_relation),
    ("R2", rule_subject_object),
    ("R3", rule_relation_object),
    ("R4", rule_crossover),
)


def prune(
    triples: Iterable[Triple], *, rules: Iterable[str] | None = None
) -> tuple[list[Triple], PruneReport]:
    """Apply the rules in order R1..R4, repeating until a pass removes nothing.

    `rules` restricts which rule ids run (default: all four). Triples with a
    field that normalizes to nothing are discarded with a warning before any
    rule runs and do not appear in the report counts. Survivors come back in
    provenance-key order; `passes` counts full sweeps including the final
    sweep that removed nothing.
    """
    enabled = set(RULE_IDS) if rules is None else set(rules)
    unknown = enabled - set(RULE_IDS)
    if unknown:
        raise ValueError(f"unknown rule ids: {sorted(unknown)}")

    normalized: list[NormalizedTriple] = []
    for t in triples:
        try:
            normalized.append(normalize(t))
        except EmptyFieldError as e:
            logger.warning("discarding triple: %s", e)
    normalized.sort(key=lambda nt: nt.key)

    alive: dict[Key, NormalizedTriple] = {}
    for nt in normalized:
        if nt.key in alive:
            raise ValueError(f"duplicate ordering key {nt.key}")
        alive[nt.key] = nt

    all_removals: list[Removal] = []
    passes = 0
    while True:
        passes += 1
        removed_this_pass = 0
        for rule_id, fn in _RULES:
            if rule_id not in enabled:
                continue
            removals = fn(alive.values())
            for r in removals:
                del alive[r.removed]
            all_removals.extend(removals)
            removed_this_pass += len(removals)
        if removed_this_pass == 0:
            break

    survivors = [nt.original for nt in alive.values()]
    report = PruneReport(
        input_count=len(normalized),
        output_count=len(survivors),
        passes=passes,
        removals=all_removals,
    )
    return survivors, report
